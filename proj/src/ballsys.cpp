#include "sqc/ballsys.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqc {

bool intersects(const PointSet& a, const PointSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i;
        else ++j;
    }
    return false;
}

bool includes(const PointSet& super, const PointSet& sub) {
    if (sub.size() > super.size()) return false;
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

PointSet set_union(const PointSet& a, const PointSet& b) {
    PointSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains(const PointSet& s, PointId x) { return std::binary_search(s.begin(), s.end(), x); }

PointSet normalized(PointSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::vector<Ball> BallSystem::balls_containing(PointId x, int depth) const {
    std::vector<Ball> out;
    for (std::size_t i = 0; i < num_balls(depth); ++i) {
        Ball b{depth, i};
        if (contains(realize(b), x)) out.push_back(b);
    }
    return out;
}

std::vector<Ball> BallSystem::layer(int depth) const {
    std::vector<Ball> out(num_balls(depth));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Ball{depth, i};
    return out;
}

PointSet BallSystem::all_points() const {
    PointSet s(num_points());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<PointId>(i);
    return s;
}

// ---- ExplicitSystem -------------------------------------------------------------

ExplicitSystem::ExplicitSystem(std::size_t points, int n0, int n_max, AdmissibleFn q)
    : BallSystem(n0, n_max, std::move(q)), points_(points) {
    if (n_max < n0) throw std::invalid_argument("empty depth range");
    layers_.resize(static_cast<std::size_t>(n_max - n0 + 1));
}

std::size_t ExplicitSystem::add_ball(int depth, PointId center, PointSet realization, long parent) {
    if (depth < n0_ || depth > n_max_) throw std::out_of_range("ball depth outside range");
    realization = normalized(std::move(realization));
    if (realization.empty()) throw std::invalid_argument("ball realization must be nonempty");
    if (realization.back() >= points_) throw std::out_of_range("realization outside ground set");
    auto& layer = layers_[static_cast<std::size_t>(depth - n0_)];
    layer.push_back(Entry{center, std::move(realization), parent});
    return layer.size() - 1;
}

void ExplicitSystem::set_parent(const Ball& b, long parent) {
    layers_.at(static_cast<std::size_t>(b.depth - n0_)).at(b.index).parent = parent;
}

std::size_t ExplicitSystem::num_balls(int depth) const {
    if (depth < n0_ || depth > n_max_) return 0;
    return layers_[static_cast<std::size_t>(depth - n0_)].size();
}

const ExplicitSystem::Entry& ExplicitSystem::entry(const Ball& b) const {
    return layers_.at(static_cast<std::size_t>(b.depth - n0_)).at(b.index);
}

PointSet ExplicitSystem::realize(const Ball& b) const { return entry(b).real; }

Ball ExplicitSystem::shift(const Ball& b, long k, bool* truncated) const {
    Ball cur = b;
    for (long i = 0; i < k; ++i) {
        const Entry& e = entry(cur);
        if (cur.depth == n0_ || e.parent < 0) {
            if (truncated) *truncated = true;
            return cur;
        }
        cur = Ball{cur.depth - 1, static_cast<std::size_t>(e.parent)};
    }
    return cur;
}

PointId ExplicitSystem::center(const Ball& b) const { return entry(b).center; }

// ---- MetricBallSystem -----------------------------------------------------------

MetricBallSystem::MetricBallSystem(std::vector<std::vector<double>> points, int n0, int n_max, double r0)
    : BallSystem(n0, n_max, AdmissibleFn::constant(2)), pts_(std::move(points)), r0_(r0) {
    if (pts_.empty()) throw std::invalid_argument("empty point cloud");
}

double MetricBallSystem::radius(int depth) const { return r0_ * std::ldexp(1.0, -depth); }

double MetricBallSystem::dist(PointId a, PointId b) const {
    double d = 0.0;
    for (std::size_t i = 0; i < pts_[a].size(); ++i) d = std::max(d, std::abs(pts_[a][i] - pts_[b][i]));
    return d;
}

PointSet MetricBallSystem::realize(const Ball& b) const {
    PointSet out;
    double r = radius(b.depth);
    auto c = static_cast<PointId>(b.index);
    for (std::size_t i = 0; i < pts_.size(); ++i)
        if (dist(c, static_cast<PointId>(i)) <= r) out.push_back(static_cast<PointId>(i));
    return out;
}

Ball MetricBallSystem::shift(const Ball& b, long k, bool* truncated) const {
    long d = static_cast<long>(b.depth) - k;
    if (d < n0_) {
        if (truncated) *truncated = true;
        d = n0_;
    }
    return Ball{static_cast<int>(d), b.index};
}

std::vector<Ball> MetricBallSystem::balls_containing(PointId x, int depth) const {
    std::vector<Ball> out;
    double r = radius(depth);
    for (std::size_t i = 0; i < pts_.size(); ++i)
        if (dist(x, static_cast<PointId>(i)) <= r) out.push_back(Ball{depth, i});
    return out;
}

// ---- axioms ----------------------------------------------------------------------

bool AxiomReport::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

const AxiomResult& AxiomReport::get(const std::string& name) const {
    for (const auto& r : results)
        if (r.name == name) return r;
    throw std::out_of_range("no axiom named " + name);
}

namespace {

std::string ball_str(const Ball& b) {
    return "(depth " + std::to_string(b.depth) + ", #" + std::to_string(b.index) + ")";
}

struct Cache {
    const BallSystem& sys;
    int lo;
    std::vector<std::vector<PointSet>> real;
    Cache(const BallSystem& s, int lo_, int hi) : sys(s), lo(lo_) {
        for (int d = lo; d <= hi; ++d) {
            std::vector<PointSet> layer(s.num_balls(d));
            for (std::size_t i = 0; i < layer.size(); ++i) layer[i] = s.realize(Ball{d, i});
            real.push_back(std::move(layer));
        }
    }
    const PointSet& get(const Ball& b) const {
        if (b.depth >= lo && b.depth - lo < static_cast<int>(real.size()))
            return real[static_cast<std::size_t>(b.depth - lo)][b.index];
        throw std::out_of_range("ball outside the cached depth range");
    }
};

}  // namespace

AxiomReport check_axioms(const BallSystem& sys, int lo, int hi) {
    lo = std::max(lo, sys.min_depth());
    hi = std::min(hi, sys.max_depth());
    AxiomReport rep;
    AxiomResult sc0, sc1i, sc1ii, sc1iii, sc2, sc3;
    sc0.name = "SC0";
    sc1i.name = "SC1(i)";
    sc1ii.name = "SC1(ii)";
    sc1iii.name = "SC1(iii)";
    sc2.name = "SC2";
    sc3.name = "SC3";
    auto fail = [](AxiomResult& r, const std::string& w) {
        if (r.pass) r.witness = w;
        r.pass = false;
    };
    if (hi < lo) {
        rep.results = {sc0, sc1i, sc1ii, sc1iii, sc2, sc3};
        return rep;
    }
    Cache cache(sys, sys.min_depth(), hi);  // shifts land anywhere in [n0, hi]
    const int n0 = sys.min_depth();

    for (int d = lo; d <= hi; ++d) {
        for (std::size_t i = 0; i < sys.num_balls(d); ++i) {
            Ball b{d, i};
            const PointSet& rb = cache.get(b);
            int kmax = d - n0;
            for (int k = 0; k <= kmax; ++k) {
                Ball kb = sys.shift(b, k);
                ++sc0.checked;
                if (kb.depth != d - k) fail(sc0, "depth of shift " + std::to_string(k) + " of " + ball_str(b));
                for (int j = 0; j + k <= kmax; ++j) {
                    if (sys.shift(kb, j) != sys.shift(b, j + k))
                        fail(sc0, "shift is not additive at " + ball_str(b) + " j=" + std::to_string(j) +
                                      " k=" + std::to_string(k));
                }
                ++sc1i.checked;
                if (!includes(cache.get(kb), rb))
                    fail(sc1i, std::to_string(k) + "." + ball_str(b) + " does not contain " + ball_str(b));
            }
            // inclusion candidates: balls at other depths containing the first point of b^
            for (int d2 = lo; d2 <= hi; ++d2) {
                for (const Ball& b2 : sys.balls_containing(rb.front(), d2)) {
                    if (b2 == b) continue;
                    const PointSet& r2 = cache.get(b2);
                    if (!includes(r2, rb)) continue;
                    ++sc1iii.checked;
                    if (d < d2) fail(sc1iii, ball_str(b) + " is inside deeper " + ball_str(b2));
                    int km = std::min(d, d2) - n0;
                    for (int k = 1; k <= km; ++k) {
                        ++sc1ii.checked;
                        if (!includes(cache.get(sys.shift(b2, k)), cache.get(sys.shift(b, k))))
                            fail(sc1ii, "shift " + std::to_string(k) + " breaks " + ball_str(b) + " in " +
                                            ball_str(b2));
                    }
                }
            }
            // SC2 with b' = b: shallower intersecting balls must swallow it after a q-shift
            for (int d1 = lo; d1 <= d; ++d1) {
                std::set<std::size_t> seen;
                for (PointId x : rb) {
                    for (const Ball& b1 : sys.balls_containing(x, d1)) {
                        if (!seen.insert(b1.index).second) continue;
                        ++sc2.checked;
                        Ball qb = sys.shift_by(b1, sys.q());
                        if (!includes(cache.get(qb), rb))
                            fail(sc2, "q." + ball_str(b1) + " misses part of " + ball_str(b));
                    }
                }
            }
        }
    }

    // SC3: at depth hi, the balls containing x must separate x from every other point
    if (sys.num_points() > 1) {
        for (PointId x = 0; x < sys.num_points(); ++x) {
            auto bs = sys.balls_containing(x, hi);
            ++sc3.checked;
            if (bs.empty()) {
                fail(sc3, "no depth-" + std::to_string(hi) + " ball contains point " + std::to_string(x));
                continue;
            }
            PointSet inter = cache.get(bs.front());
            for (std::size_t i = 1; i < bs.size() && inter.size() > 1; ++i) {
                PointSet tmp;
                const PointSet& r = cache.get(bs[i]);
                std::set_intersection(inter.begin(), inter.end(), r.begin(), r.end(), std::back_inserter(tmp));
                inter.swap(tmp);
            }
            for (PointId y : inter)
                if (y != x) {
                    fail(sc3, "points " + std::to_string(x) + " and " + std::to_string(y) + " are not separated");
                    break;
                }
        }
    }
    rep.results = {sc0, sc1i, sc1ii, sc1iii, sc2, sc3};
    return rep;
}

Quasidistance quasidistance_rho(const BallSystem& sys, PointId x, PointId y) {
    Quasidistance out;
    if (x == y) {
        out.depth = sys.max_depth();
        return out;
    }
    for (int d = sys.max_depth(); d >= sys.min_depth(); --d) {
        for (const Ball& b : sys.balls_containing(x, d)) {
            if (contains(sys.realize(b), y)) {
                out.depth = d;
                out.value = std::exp(-static_cast<double>(d));
                return out;
            }
        }
    }
    out.depth = sys.min_depth();
    out.value = std::exp(-static_cast<double>(sys.min_depth()));
    out.truncated = true;
    return out;
}

bool entourage_contains(const BallSystem& sys, int n, PointId x, PointId y) {
    if (x == y) return true;
    for (int d = sys.max_depth(); d >= std::max(n, sys.min_depth()); --d)
        for (const Ball& b : sys.balls_containing(x, d))
            if (contains(sys.realize(b), y)) return true;
    return false;
}

namespace {

/// Balls of depth in [n, max] whose realization contains x.
std::vector<Ball> candidates(const BallSystem& sys, PointId x, int n) {
    std::vector<Ball> out;
    for (int d = sys.max_depth(); d >= std::max(n, sys.min_depth()); --d) {
        auto bs = sys.balls_containing(x, d);
        out.insert(out.end(), bs.begin(), bs.end());
    }
    return out;
}

}  // namespace

std::optional<Ball> find_round(const BallSystem& sys, const PointSet& a, const AdmissibleFn& k, int n) {
    return find_ring(sys, a, a, k, n);
}

std::optional<Ball> find_ring(const BallSystem& sys, const PointSet& a_minus, const PointSet& a_plus,
                              const AdmissibleFn& k, int n) {
    if (!includes(a_plus, a_minus)) throw std::invalid_argument("ring requires a- inside a+");
    if (a_minus.empty()) return std::nullopt;
    // a ball inside a- contains some point of a-; scan all of them
    std::set<Ball> seen;
    for (PointId x : a_minus) {
        for (const Ball& b : candidates(sys, x, n)) {
            if (!seen.insert(b).second) continue;
            PointSet rb = sys.realize(b);
            if (!includes(a_minus, rb)) continue;
            if (includes(sys.realize(sys.shift_by(b, k)), a_plus)) return b;
        }
    }
    return std::nullopt;
}

std::optional<Ball> find_outer_ring(const BallSystem& sys, const PointSet& a_minus, const PointSet& a_plus,
                                    const AdmissibleFn& j, int n) {
    if (!includes(a_plus, a_minus)) throw std::invalid_argument("outer ring requires a- inside a+");
    if (a_minus.empty()) return std::nullopt;
    for (const Ball& b : candidates(sys, a_minus.front(), n)) {
        if (!includes(sys.realize(b), a_minus)) continue;
        if (includes(a_plus, sys.realize(sys.shift_by(b, j)))) return b;
    }
    return std::nullopt;
}

// ---- serialization ---------------------------------------------------------------

std::string format_ranges(const PointSet& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[j] + 1) ++j;
        if (i) os << ',';
        os << s[i];
        if (j > i) os << '-' << s[j];
        i = j + 1;
    }
    return os.str();
}

PointSet parse_ranges(const std::string& text) {
    PointSet out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        auto dash = tok.find('-');
        if (dash == std::string::npos) {
            out.push_back(static_cast<PointId>(std::stoul(tok)));
        } else {
            auto a = std::stoul(tok.substr(0, dash));
            auto b = std::stoul(tok.substr(dash + 1));
            if (b < a) throw std::invalid_argument("bad range " + tok);
            for (auto v = a; v <= b; ++v) out.push_back(static_cast<PointId>(v));
        }
    }
    return normalized(std::move(out));
}

void write_system(std::ostream& os, const BallSystem& sys) {
    os << "points " << sys.num_points() << '\n';
    os << "depths " << sys.min_depth() << ' ' << sys.max_depth() << '\n';
    os << "q " << sys.q().serialize() << '\n';
    os << "tiling " << (sys.is_tiling() ? 1 : 0) << '\n';
    for (int d = sys.min_depth(); d <= sys.max_depth(); ++d) {
        for (std::size_t i = 0; i < sys.num_balls(d); ++i) {
            Ball b{d, i};
            bool trunc = false;
            Ball p = sys.shift(b, 1, &trunc);
            long parent = trunc ? -1 : static_cast<long>(p.index);
            os << "ball " << i << ' ' << d << ' ' << sys.center(b) << ' ' << parent << ' '
               << format_ranges(sys.realize(b)) << '\n';
        }
    }
}

std::unique_ptr<ExplicitSystem> read_system(std::istream& is) {
    std::string line;
    std::size_t points = 0;
    int n0 = 0, n1 = -1;
    bool tiling = false;
    AdmissibleFn q = AdmissibleFn::zero();
    std::unique_ptr<ExplicitSystem> sys;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "points") {
            ls >> points;
        } else if (key == "depths") {
            ls >> n0 >> n1;
        } else if (key == "q") {
            std::string rest;
            std::getline(ls, rest);
            q = AdmissibleFn::parse(rest);
        } else if (key == "tiling") {
            int t = 0;
            ls >> t;
            tiling = t != 0;
        } else if (key == "ball") {
            if (!sys) {
                if (n1 < n0) throw std::runtime_error("system header missing before balls");
                sys = std::make_unique<ExplicitSystem>(points, n0, n1, q);
            }
            std::size_t id;
            int depth;
            PointId center;
            long parent;
            std::string ranges;
            if (!(ls >> id >> depth >> center >> parent >> ranges))
                throw std::runtime_error("malformed ball line " + std::to_string(lineno));
            std::size_t got = sys->add_ball(depth, center, parse_ranges(ranges), parent);
            if (got != id) throw std::runtime_error("ball ids must be consecutive per depth, line " +
                                                    std::to_string(lineno));
        } else {
            throw std::runtime_error("unknown key '" + key + "' at line " + std::to_string(lineno));
        }
    }
    if (!sys) {
        if (n1 < n0) throw std::runtime_error("empty system description");
        sys = std::make_unique<ExplicitSystem>(points, n0, n1, q);
    }
    sys->set_tiling(tiling);
    return sys;
}

}  // namespace sqc
