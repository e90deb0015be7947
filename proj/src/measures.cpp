#include "sqc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sqc {

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// ---- gauges ---------------------------------------------------------------------

double Gauge::operator()(const PointSet& a) const {
    if (a.empty()) return 0.0;
    if (on_set) return on_set(a);
    return 0.0;
}

double Gauge::of_ball(const BallSystem& sys, const Ball& b) const {
    if (on_ball) return on_ball(b);
    return (*this)(sys.realize(b));
}

Gauge Gauge::diameter_power(const GridSystem& g, double s) {
    Gauge out;
    out.kind = Kind::diameter_power;
    out.name = s == 1.0 ? "diam" : "diam^" + std::to_string(s);
    const GridSystem* grid = &g;
    out.on_set = [grid, s](const PointSet& a) {
        const int d = grid->dim();
        std::vector<std::size_t> lo(static_cast<std::size_t>(d), SIZE_MAX), hi(static_cast<std::size_t>(d), 0);
        for (PointId x : a) {
            std::size_t idx = x;
            for (int i = 0; i < d; ++i) {
                std::size_t m = grid->cells(i, grid->max_depth());
                std::size_t c = idx % m;
                idx /= m;
                lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], c);
                hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], c);
            }
        }
        double diam = 0.0;
        for (int i = 0; i < d; ++i) {
            double m = static_cast<double>(grid->cells(i, grid->max_depth()));
            diam = std::max(diam, static_cast<double>(hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1) / m);
        }
        return std::pow(diam, s);
    };
    out.on_ball = [grid, s](const Ball& b) {
        double diam = 0.0;
        for (int i = 0; i < grid->dim(); ++i)
            diam = std::max(diam, 1.0 / static_cast<double>(grid->cells(i, b.depth)));
        return std::pow(diam, s);
    };
    return out;
}

Gauge Gauge::diameter_power(const MetricBallSystem& m, double s) {
    Gauge out;
    out.kind = Kind::diameter_power;
    out.name = "diam^" + std::to_string(s);
    const MetricBallSystem* sys = &m;
    out.on_set = [sys, s](const PointSet& a) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) d = std::max(d, sys->dist(a[i], a[j]));
        return std::pow(d, s);
    };
    return out;
}

Gauge Gauge::oscillation(std::shared_ptr<const SampledFunction> f) {
    Gauge out;
    out.kind = Kind::oscillation;
    out.name = "osc(" + f->name + ")";
    out.on_set = [f](const PointSet& a) { return f->osc(a); };
    return out;
}

Gauge Gauge::table(std::function<double(const Ball&)> values, bool monotone, std::string name) {
    Gauge out;
    out.kind = Kind::table;
    out.name = std::move(name);
    out.monotone = monotone;
    out.on_ball = std::move(values);
    return out;
}

Gauge Gauge::combination(double lambda, const Gauge& a, const Gauge& b) {
    if (lambda < 0.0) throw std::invalid_argument("gauge combination needs lambda >= 0");
    Gauge out;
    out.kind = Kind::table;
    out.name = std::to_string(lambda) + "*" + a.name + "+" + b.name;
    out.monotone = a.monotone && b.monotone;
    if (a.on_set && b.on_set)
        out.on_set = [lambda, a, b](const PointSet& s) { return lambda * a(s) + b(s); };
    if (a.on_ball && b.on_ball)
        out.on_ball = [lambda, a, b](const Ball& x) { return lambda * a.on_ball(x) + b.on_ball(x); };
    return out;
}

double shifted_gauge(const BallSystem& sys, const Gauge& phi, const AdmissibleFn& l, const Ball& b) {
    if (!phi.monotone) throw NonMonotoneGauge("shifted gauge needs a monotone gauge: " + phi.name);
    if (l.is_zero()) return phi.of_ball(sys, b);
    return phi.of_ball(sys, sys.shift_by(b, l));
}

// ---- Caratheodory content --------------------------------------------------------

namespace {

double node_cost(const BallSystem& sys, const Gauge& phi, double p, const CaratheodoryOptions& opt, const Ball& b) {
    double v = opt.shift ? shifted_gauge(sys, phi, *opt.shift, b) : phi.of_ball(sys, b);
    return std::pow(v, p);
}

std::vector<Ball> balls_meeting(const BallSystem& sys, const PointSet& A, int d) {
    std::vector<char> seen(sys.num_balls(d), 0);
    std::vector<Ball> out;
    for (PointId x : A)
        for (const Ball& b : sys.balls_containing(x, d))
            if (!seen[b.index]) {
                seen[b.index] = 1;
                out.push_back(b);
            }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ContentResult caratheodory_content(const BallSystem& sys, const Gauge& phi, double p, const AdmissibleFn& k, int n,
                                   const PointSet& A, const CaratheodoryOptions& opt) {
    ContentResult res;
    if (A.empty()) {
        res.exact = true;
        return res;
    }
    n = std::max(n, sys.min_depth());
    if (n > sys.max_depth()) {
        res.infinite = true;
        res.value = kInfinity;
        res.diagnostic = "no balls at depth >= " + std::to_string(n);
        return res;
    }
    const int dmax = std::min(n + std::max(opt.depth_span, 0), sys.max_depth());
    res.max_depth_used = dmax;

    if (sys.is_tiling()) {
        int dmin = n;
        for (int m = n; m <= dmax; ++m)
            dmin = std::min(dmin, std::max(sys.min_depth(), static_cast<int>(m - k(m))));
        // best[d][ball index] and whether the node itself is used
        struct Node {
            double best;
            bool self;
        };
        std::vector<std::map<std::size_t, Node>> best(static_cast<std::size_t>(dmax - dmin + 1));
        for (int d = dmax; d >= dmin; --d) {
            auto& layer = best[static_cast<std::size_t>(d - dmin)];
            std::map<std::size_t, double> child_sum;
            if (d < dmax)
                for (const auto& [idx, node] : best[static_cast<std::size_t>(d + 1 - dmin)])
                    child_sum[sys.shift(Ball{d + 1, idx}, 1).index] += node.best;
            for (const Ball& b : balls_meeting(sys, A, d)) {
                double own = node_cost(sys, phi, p, opt, b);
                auto it = child_sum.find(b.index);
                double kids = it == child_sum.end() ? kInfinity : it->second;
                if (d == dmax) kids = kInfinity;
                layer[b.index] = own <= kids ? Node{own, true} : Node{kids, false};
            }
        }
        double total = 0.0;
        for (const auto& [idx, node] : best.front()) total += node.best;
        res.value = total;
        res.exact = true;
        // reconstruct the witness cover top-down
        std::vector<Ball> stack;
        for (const auto& [idx, node] : best.front()) stack.push_back(Ball{dmin, idx});
        while (!stack.empty()) {
            Ball b = stack.back();
            stack.pop_back();
            const Node& node = best[static_cast<std::size_t>(b.depth - dmin)].at(b.index);
            if (node.self) {
                res.cover.push_back(sys.realize(b));
                continue;
            }
            for (const auto& [idx, child] : best[static_cast<std::size_t>(b.depth + 1 - dmin)])
                if (sys.shift(Ball{b.depth + 1, idx}, 1) == b) stack.push_back(Ball{b.depth + 1, idx});
        }
        return res;
    }

    // greedy weighted set cover over balls and their k-shifts
    struct Cand {
        PointSet set;
        double cost;
    };
    std::vector<Cand> cands;
    for (int d = n; d <= dmax; ++d)
        for (const Ball& b : balls_meeting(sys, A, d)) {
            cands.push_back({sys.realize(b), node_cost(sys, phi, p, opt, b)});
            long kd = k(d);
            if (kd > 0) {
                Ball kb = sys.shift(b, kd);
                cands.push_back({sys.realize(kb), node_cost(sys, phi, p, opt, kb)});
            }
        }
    std::vector<char> need(sys.num_points(), 0);
    std::size_t left = 0;
    for (PointId x : A) {
        need[x] = 1;
        ++left;
    }
    std::vector<char> used(cands.size(), 0);
    while (left > 0) {
        double best_ratio = kInfinity;
        std::size_t best_i = cands.size();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (used[i]) continue;
            std::size_t gain = 0;
            for (PointId x : cands[i].set) gain += need[x];
            if (gain == 0) continue;
            double r = cands[i].cost / static_cast<double>(gain);
            if (r < best_ratio) {
                best_ratio = r;
                best_i = i;
            }
        }
        if (best_i == cands.size()) {
            res.infinite = true;
            res.value = kInfinity;
            res.diagnostic = "A is not coverable at depths [" + std::to_string(n) + "," + std::to_string(dmax) + "]";
            return res;
        }
        used[best_i] = 1;
        for (PointId x : cands[best_i].set)
            if (need[x]) {
                need[x] = 0;
                --left;
            }
        res.value += cands[best_i].cost;
        res.cover.push_back(cands[best_i].set);
    }
    return res;
}

// ---- curve covers ------------------------------------------------------------------

IntervalCover min_interval_cover(std::size_t length, const std::vector<CurveInterval>& intervals) {
    IntervalCover out;
    if (length == 0) {
        out.cost = 0.0;
        return out;
    }
    std::vector<std::size_t> order(intervals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return intervals[a].last < intervals[b].last;
    });
    // best[i]: cheapest family covering at least [0, i); range-min tree over positions
    std::size_t size = 1;
    while (size < length + 1) size <<= 1;
    std::vector<double> tree(2 * size, kInfinity);
    std::vector<double> best(length + 1, kInfinity);
    std::vector<long> via(length + 1, -1), from(length + 1, -1);
    auto update = [&](std::size_t pos, double v) {
        std::size_t i = pos + size;
        tree[i] = std::min(tree[i], v);
        for (i >>= 1; i; i >>= 1) tree[i] = std::min(tree[2 * i], tree[2 * i + 1]);
    };
    auto query = [&](std::size_t lo, std::size_t hi) {  // min over [lo, hi]
        double r = kInfinity;
        std::size_t arg_lo = lo + size, arg_hi = hi + size + 1;
        for (; arg_lo < arg_hi; arg_lo >>= 1, arg_hi >>= 1) {
            if (arg_lo & 1) r = std::min(r, tree[arg_lo++]);
            if (arg_hi & 1) r = std::min(r, tree[--arg_hi]);
        }
        return r;
    };
    best[0] = 0.0;
    update(0, 0.0);
    for (std::size_t oi : order) {
        const CurveInterval& iv = intervals[oi];
        if (iv.first > iv.last || iv.last >= length) continue;
        double base = query(iv.first, iv.last);
        if (!std::isfinite(base)) continue;
        double c = base + iv.cost;
        if (c < best[iv.last + 1]) {
            best[iv.last + 1] = c;
            via[iv.last + 1] = static_cast<long>(oi);
            update(iv.last + 1, c);
        }
    }
    out.cost = best[length];
    if (!std::isfinite(out.cost)) return out;
    // reconstruct: walk back from length through chosen intervals
    std::size_t pos = length;
    while (pos > 0) {
        long oi = via[pos];
        if (oi < 0) break;
        out.chosen.push_back(static_cast<std::size_t>(oi));
        const CurveInterval& iv = intervals[static_cast<std::size_t>(oi)];
        double target = best[pos] - iv.cost;
        std::size_t next = iv.first;
        for (std::size_t j = iv.first; j <= iv.last; ++j)
            if (std::abs(best[j] - target) <= 1e-12 * (1.0 + std::abs(target))) {
                next = j;
                break;
            }
        pos = next;
    }
    std::reverse(out.chosen.begin(), out.chosen.end());
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> runs_inside(const std::vector<PointId>& curve, const PointSet& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t t = 0;
    while (t < curve.size()) {
        if (!contains(s, curve[t])) {
            ++t;
            continue;
        }
        std::size_t u = t;
        while (u + 1 < curve.size() && contains(s, curve[u + 1])) ++u;
        out.emplace_back(t, u);
        t = u + 1;
    }
    return out;
}

double min_curve_cover(const BallSystem& sys, const Gauge& phi, const AdmissibleFn& m,
                       const std::vector<PointId>& curve, int n, int depth_span) {
    for (PointId x : curve)
        if (x >= sys.num_points()) throw std::invalid_argument("curve leaves the ground set");
    if (curve.empty()) return 0.0;
    PointSet on_curve = normalized(curve);
    std::vector<CurveInterval> ivs;
    std::map<Ball, bool> seen;
    const int dmax = std::min(n + depth_span, sys.max_depth());
    for (int d = std::max(n, sys.min_depth()); d <= dmax; ++d) {
        for (std::size_t i = 0; i < sys.num_balls(d); ++i) {
            Ball b{d, i};
            long md = m(d);
            for (long j = 0; j <= md; ++j) {
                bool trunc = false;
                Ball jb = sys.shift(b, j, &trunc);
                if (!seen.emplace(jb, true).second) {
                    if (trunc) break;
                    continue;
                }
                PointSet r = sys.realize(jb);
                if (intersects(r, on_curve)) {
                    double c = phi(r);
                    for (auto [a, e] : runs_inside(curve, r)) ivs.push_back({a, e, c, 0});
                }
                if (trunc) break;
            }
        }
    }
    return min_interval_cover(curve.size(), ivs).cost;
}

// ---- packing pre-content ------------------------------------------------------------

std::vector<PackingContent> packing_precontent_multi(const BallSystem& sys, const Gauge& phi,
                                                     const std::vector<double>& ps, const AdmissibleFn& k,
                                                     const AdmissibleFn& l, int n, const PointSet& A, int restarts,
                                                     std::uint64_t seed, int max_depth) {
    std::vector<PackingContent> out(ps.size());
    const bool exact = sys.is_tiling() && k.is_zero();
    for (auto& pc : out) pc.exact = exact;
    if (A.empty()) return out;
    restarts = std::max(restarts, 1);
    for (int r = 0; r < restarts; ++r) {
        std::uint64_t s = r == 0 ? 0 : split_seed(seed, static_cast<std::uint64_t>(r));
        Packing P = max_packing(sys, A, k, n, s, max_depth);
        std::vector<double> terms;
        terms.reserve(P.pairs.size());
        for (const auto& pr : P.pairs) terms.push_back(shifted_gauge(sys, phi, l, pr.witness));
        for (std::size_t i = 0; i < ps.size(); ++i) {
            double sum = 0.0;
            for (double t : terms) sum += std::pow(t, ps[i]);
            out[i].per_restart.push_back(sum);
            if (r == 0 || sum > out[i].value) {
                out[i].value = sum;
                if (ps.size() == 1) out[i].witness = P;
                else {
                    out[i].witness.base = P.base;
                    out[i].witness.k = P.k;
                    out[i].witness.n = P.n;
                }
            }
        }
        if (exact) break;  // the tiling is the only maximal packing
    }
    return out;
}

PackingContent packing_precontent(const BallSystem& sys, const Gauge& phi, double p, const AdmissibleFn& k,
                                  const AdmissibleFn& l, int n, const PointSet& A, int restarts, std::uint64_t seed,
                                  int max_depth) {
    return packing_precontent_multi(sys, phi, {p}, k, l, n, A, restarts, seed, max_depth).front();
}

double hausdorff_content(const GridSystem& g, const PointSet& A, double s, int n) {
    CaratheodoryOptions opt;
    opt.depth_span = g.max_depth() - n;
    return caratheodory_content(g, Gauge::diameter_power(g, s), 1.0, AdmissibleFn::zero(), n, A, opt).value;
}

}  // namespace sqc
