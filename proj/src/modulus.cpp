#include "sqc/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "sqc/covering.hpp"

namespace sqc {

void CurveFamily::add(std::vector<PointId> curve, double w, double len) {
    const double m = curve.empty() ? 0.0 : 1.0 / static_cast<double>(curve.size());
    mass.emplace_back(curve.size(), m);
    curves.push_back(std::move(curve));
    weight.push_back(w);
    length.push_back(len);
}

double CurveFamily::total_weight() const { return std::accumulate(weight.begin(), weight.end(), 0.0); }

void CurveFamily::validate() const {
    if (mass.size() != curves.size() || weight.size() != curves.size())
        throw std::invalid_argument("curve family arrays have inconsistent sizes");
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (curves[i].empty()) throw std::invalid_argument("empty curve " + std::to_string(i));
        if (mass[i].size() != curves[i].size())
            throw std::invalid_argument("mass vector size mismatch on curve " + std::to_string(i));
        double s = 0.0;
        for (double v : mass[i]) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("negative curve mass");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("curve mass does not sum to 1 on curve " + std::to_string(i));
        if (!(weight[i] >= 0.0) || !std::isfinite(weight[i])) throw std::invalid_argument("bad curve weight");
    }
}

const char* to_string(ShiftEncoding e) {
    switch (e) {
        case ShiftEncoding::constraint: return "constraint";
        case ShiftEncoding::objective: return "objective";
        case ShiftEncoding::literal: return "literal";
    }
    return "?";
}

ShiftEncoding parse_encoding(const std::string& s) {
    if (s == "constraint") return ShiftEncoding::constraint;
    if (s == "objective") return ShiftEncoding::objective;
    if (s == "literal") return ShiftEncoding::literal;
    throw std::invalid_argument("unknown shift encoding: " + s);
}

namespace {

std::uint64_t key(const Ball& b) { return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b.depth)) << 40) | b.index; }

/// Depth-n gauge variables tied into groups; w is the objective weight per group.
struct Layout {
    std::vector<std::uint32_t> group;  // per depth-n ball
    std::vector<double> w;
};

/// Curves sharing the same enlarged-set incidence pattern.
struct CurveClass {
    std::size_t length = 0;
    std::vector<CurveInterval> intervals;  // tag = enlarged set id
    std::vector<std::size_t> members;
};

struct Prepared {
    std::vector<std::vector<std::size_t>> members;  // enlarged set id -> depth-n balls
    std::vector<CurveClass> classes;
    std::vector<std::size_t> class_of;
    bool infeasible = false;
    std::string diagnostic;
};

Prepared prepare(const BallSystem& sys, const CurveFamily& fam, int n, long e) {
    Prepared P;
    std::unordered_map<std::uint64_t, std::uint32_t> eid;
    std::set<int> depths;
    const std::size_t nb = sys.num_balls(n);
    for (std::size_t b = 0; b < nb; ++b) {
        Ball E = sys.shift(Ball{n, b}, e);
        auto [it, fresh] = eid.try_emplace(key(E), static_cast<std::uint32_t>(P.members.size()));
        if (fresh) P.members.emplace_back();
        P.members[it->second].push_back(b);
        depths.insert(E.depth);
    }
    std::map<std::vector<std::size_t>, std::size_t> signature;
    P.class_of.resize(fam.size());
    std::unordered_map<std::uint32_t, std::size_t> open;
    for (std::size_t c = 0; c < fam.size(); ++c) {
        const auto& curve = fam.curves[c];
        std::vector<CurveInterval> ivs;
        open.clear();
        for (std::size_t t = 0; t < curve.size(); ++t) {
            if (curve[t] >= sys.num_points()) throw std::invalid_argument("curve leaves the ground set");
            bool hit = false;
            for (int d : depths)
                for (const Ball& E : sys.balls_containing(curve[t], d)) {
                    auto it = eid.find(key(E));
                    if (it == eid.end()) continue;
                    hit = true;
                    auto o = open.find(it->second);
                    if (o != open.end() && ivs[o->second].last + 1 == t) {
                        ivs[o->second].last = t;
                    } else {
                        open[it->second] = ivs.size();
                        ivs.push_back(CurveInterval{t, t, 1.0, it->second});
                    }
                }
            if (!hit && !P.infeasible) {
                P.infeasible = true;
                P.diagnostic = "curve " + std::to_string(c) + " meets no ball at depth " + std::to_string(n);
            }
        }
        std::vector<std::size_t> sig{curve.size()};
        for (const auto& iv : ivs) {
            sig.push_back(iv.tag);
            sig.push_back(iv.first);
            sig.push_back(iv.last);
        }
        auto [it, fresh] = signature.try_emplace(std::move(sig), P.classes.size());
        if (fresh) P.classes.push_back(CurveClass{curve.size(), std::move(ivs), {}});
        P.classes[it->second].members.push_back(c);
        P.class_of[c] = it->second;
    }
    return P;
}

using Row = std::vector<std::pair<std::uint32_t, double>>;

Row normalize_row(std::map<std::uint32_t, double>& acc) {
    Row r(acc.begin(), acc.end());
    acc.clear();
    return r;
}

struct Costs {
    std::vector<double> cost;
    std::vector<std::uint32_t> arg;  // cheapest group per enlarged set
};

Costs enlarged_costs(const Prepared& P, const Layout& L, const std::vector<double>& x) {
    Costs C;
    C.cost.assign(P.members.size(), kInfinity);
    C.arg.assign(P.members.size(), 0);
    for (std::size_t e = 0; e < P.members.size(); ++e)
        for (std::size_t b : P.members[e]) {
            std::uint32_t g = L.group[b];
            if (x[g] < C.cost[e]) {
                C.cost[e] = x[g];
                C.arg[e] = g;
            }
        }
    return C;
}

IntervalCover class_cover(CurveClass& cc, const Costs& C) {
    for (auto& iv : cc.intervals) iv.cost = C.cost[iv.tag];
    return min_interval_cover(cc.length, cc.intervals);
}

Row cover_row(const CurveClass& cc, const IntervalCover& ic, const Costs& C) {
    std::map<std::uint32_t, double> acc;
    for (std::size_t i : ic.chosen) acc[C.arg[cc.intervals[i].tag]] += 1.0;
    return normalize_row(acc);
}

Row literal_row(const CurveClass& cc, const Prepared& P, const Layout& L) {
    std::set<std::size_t> balls;
    for (const auto& iv : cc.intervals)
        for (std::size_t b : P.members[iv.tag]) balls.insert(b);
    std::map<std::uint32_t, double> acc;
    for (std::size_t b : balls) acc[L.group[b]] += 1.0;
    return normalize_row(acc);
}

ModulusReport header(const ModulusOptions& opt) {
    ModulusReport rep;
    rep.n = opt.n;
    rep.p = opt.p;
    rep.k_name = opt.k.name();
    rep.l_name = opt.l.name();
    rep.m_name = opt.m.name();
    return rep;
}

void check_options(const BallSystem& sys, const ModulusOptions& opt) {
    if (!(opt.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
    if (opt.n < sys.min_depth() || opt.n > sys.max_depth()) throw std::out_of_range("depth n outside the system range");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

ModulusReport solve_with_layout(const BallSystem& sys, const CurveFamily& fam, const ModulusOptions& opt,
                                const Layout& L, long e) {
    ModulusReport rep = header(opt);
    const std::size_t nb = sys.num_balls(opt.n);
    rep.gauge.assign(nb, 0.0);
    rep.multiplier.assign(fam.size(), 0.0);
    if (fam.empty()) {
        rep.converged = true;
        rep.min_admissibility = kInfinity;
        return rep;
    }
    Prepared P = prepare(sys, fam, opt.n, e);
    if (P.infeasible) {
        rep.infeasible = true;
        rep.value = kInfinity;
        rep.dual = kInfinity;
        rep.diagnostic = P.diagnostic;
        return rep;
    }
    Program prog;
    prog.vars = L.w.size();
    prog.w = L.w;
    std::vector<std::size_t> row_class;
    std::set<Row> seen;
    auto add_row = [&](Row r, std::size_t cls) {
        if (seen.insert(r).second) {
            prog.rows.push_back(std::move(r));
            row_class.push_back(cls);
            return true;
        }
        return false;
    };

    const bool cutting = opt.encoding != ShiftEncoding::literal;
    {
        std::vector<double> ones(prog.vars, 1.0);
        Costs C = enlarged_costs(P, L, ones);
        for (std::size_t c = 0; c < P.classes.size(); ++c) {
            if (cutting) {
                IntervalCover ic = class_cover(P.classes[c], C);
                add_row(cover_row(P.classes[c], ic, C), c);
            } else {
                add_row(literal_row(P.classes[c], P, L), c);
            }
        }
    }

    std::vector<double> lambda;
    ProgramSolution sol;
    double scale = 1.0;
    const double inner_tol = cutting ? opt.tol * 0.25 : opt.tol;
    for (int round = 0;; ++round) {
        sol = solve_program(prog, opt.p, inner_tol, opt.max_sweeps, lambda);
        rep.iterations += sol.iterations;
        rep.cut_rounds = round;
        if (sol.primal == kInfinity) {
            rep.infeasible = true;
            rep.value = kInfinity;
            rep.diagnostic = "empty constraint row";
            return rep;
        }
        if (!cutting) break;
        Costs C = enlarged_costs(P, L, sol.x);
        double minc = kInfinity;
        bool added = false;
        for (std::size_t c = 0; c < P.classes.size(); ++c) {
            IntervalCover ic = class_cover(P.classes[c], C);
            minc = std::min(minc, ic.cost);
            if (ic.cost < 1.0 - 1e-12) added |= add_row(cover_row(P.classes[c], ic, C), c);
        }
        scale = std::min(1.0, minc);
        double value = scale > 0.0 ? sol.primal / std::pow(scale, opt.p) : kInfinity;
        double gap = value == kInfinity ? kInfinity : value > 0.0 ? std::max(0.0, (value - sol.dual) / value) : 0.0;
        if (gap <= opt.tol || !added || round >= opt.max_cut_rounds) break;
        lambda = sol.lambda;
        lambda.resize(prog.rows.size(), 0.0);
    }

    double value = 0.0;
    for (std::size_t g = 0; g < prog.vars; ++g)
        if (prog.w[g] > 0.0) value += prog.w[g] * std::pow(sol.x[g] / scale, opt.p);
    rep.value = value;
    rep.dual = sol.dual;
    rep.gap = value > 0.0 ? std::max(0.0, (value - sol.dual) / value) : 0.0;
    // value is feasible for every curve and sol.dual bounds a relaxation, so the gap is a certificate
    rep.converged = rep.gap <= opt.tol;
    if (!rep.converged) rep.diagnostic = "not converged within the iteration cap";
    for (std::size_t b = 0; b < nb; ++b) rep.gauge[b] = sol.x[L.group[b]] / scale;
    for (std::size_t r = 0; r < prog.rows.size(); ++r) {
        const auto& mem = P.classes[row_class[r]].members;
        for (std::size_t c : mem) rep.multiplier[c] += sol.lambda[r] / static_cast<double>(mem.size());
    }
    // admissibility of the reported gauge against the true constraints
    std::vector<double> xs(prog.vars);
    for (std::size_t g = 0; g < prog.vars; ++g) xs[g] = sol.x[g] / scale;
    Costs C = enlarged_costs(P, L, xs);
    rep.min_admissibility = kInfinity;
    for (auto& cc : P.classes) {
        double v;
        if (cutting) {
            v = class_cover(cc, C).cost;
        } else {
            Row r = literal_row(cc, P, L);
            v = 0.0;
            for (auto [g, a] : r) v += a * xs[g];
        }
        rep.min_admissibility = std::min(rep.min_admissibility, v);
    }
    return rep;
}

/// Compact ids for a per-ball key.
std::vector<std::uint32_t> compact(const std::vector<std::uint64_t>& keys, std::size_t* count) {
    std::unordered_map<std::uint64_t, std::uint32_t> id;
    std::vector<std::uint32_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        out[i] = id.try_emplace(keys[i], static_cast<std::uint32_t>(id.size())).first->second;
    *count = id.size();
    return out;
}

long effective_enlargement(const ModulusOptions& opt) {
    long m = opt.m(opt.n);
    if (opt.encoding == ShiftEncoding::objective) return m;
    return std::max(m, opt.l(opt.n));
}

}  // namespace

ModulusReport solve_modulus(const BallSystem& sys, const CurveFamily& family, const ModulusOptions& opt) {
    check_options(sys, opt);
    family.validate();
    const int n = opt.n;
    const std::size_t nb = sys.num_balls(n);
    const long k = opt.k(n);
    const bool objective = opt.encoding == ShiftEncoding::objective;
    std::vector<std::uint64_t> region(nb), witness(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        Ball a = sys.shift(Ball{n, b}, k);
        witness[b] = key(a);
        region[b] = objective ? key(sys.shift_by(a, opt.l)) : key(a);
    }
    if (!sys.is_tiling()) {
        bool trivial = true;
        for (std::size_t b = 0; b < nb && trivial; ++b) trivial = region[b] == key(Ball{n, b});
        if (!trivial)
            throw std::invalid_argument("k > 0 (or objective-side l > 0) needs a nested tiling system");
    }
    Layout L;
    std::size_t groups = 0;
    L.group = compact(region, &groups);
    // weight = number of k-cover elements sharing the region
    std::vector<std::set<std::uint64_t>> per(groups);
    for (std::size_t b = 0; b < nb; ++b) per[L.group[b]].insert(witness[b]);
    L.w.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) L.w[g] = static_cast<double>(per[g].size());
    return solve_with_layout(sys, family, opt, L, effective_enlargement(opt));
}

ModulusReport solve_packing_modulus(const BallSystem& sys, const CurveFamily& family, const ModulusOptions& opt,
                                    int restarts, std::uint64_t seed) {
    check_options(sys, opt);
    family.validate();
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    const int n = opt.n;
    const std::size_t nb = sys.num_balls(n);
    const bool objective = opt.encoding == ShiftEncoding::objective;
    std::vector<std::uint64_t> region(nb);
    for (std::size_t b = 0; b < nb; ++b) region[b] = objective ? key(sys.shift_by(Ball{n, b}, opt.l)) : key(Ball{n, b});
    if (!sys.is_tiling())
        for (std::size_t b = 0; b < nb; ++b)
            if (region[b] != key(Ball{n, b})) throw std::invalid_argument("objective-side l > 0 needs a nested tiling system");
    Layout L;
    std::size_t groups = 0;
    L.group = compact(region, &groups);
    L.w.assign(groups, 0.0);
    const PointSet Z = sys.all_points();
    // one packing suffices when every restart yields the same tiling
    const int runs = (sys.is_tiling() && opt.k(n) == 0) ? 1 : restarts;
    for (int r = 0; r < runs; ++r) {
        Packing pk = max_packing(sys, Z, opt.k, n, r == 0 ? 0 : split_seed(seed, static_cast<std::uint64_t>(r)), n);
        for (const auto& pr : pk.pairs) L.w[L.group[pr.witness.index]] += 1.0 / runs;
    }
    ModulusReport rep = solve_with_layout(sys, family, opt, L, effective_enlargement(opt));
    if (runs > 1) rep.diagnostic += (rep.diagnostic.empty() ? "" : "; ") + std::string("restart-averaged packing objective");
    return rep;
}

}  // namespace sqc
