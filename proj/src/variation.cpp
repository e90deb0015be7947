#include "sqc/variation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "sqc/covering.hpp"

namespace sqc {

std::vector<VariationRow> p_variation(const BallSystem& sys, std::shared_ptr<const SampledFunction> f,
                                      const PointSet& K, double p, const AdmissibleFn& k, const AdmissibleFn& l,
                                      int n_lo, int n_hi, int restarts, std::uint64_t seed) {
    if (K.empty()) throw std::invalid_argument("empty base set");
    Gauge phi = Gauge::oscillation(std::move(f));
    std::vector<VariationRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        PackingContent pc = packing_precontent(sys, phi, p, k, l, n, K, restarts, seed);
        rows.push_back(VariationRow{n, pc.value, pc.exact});
    }
    return rows;
}

double seminorm(const BallSystem& sys, std::shared_ptr<const SampledFunction> f, const PointSet& K, double p,
                const AdmissibleFn& k, const AdmissibleFn& l, int n, int restarts, std::uint64_t seed) {
    const double sup = f->sup_norm(K);
    auto rows = p_variation(sys, std::move(f), K, p, k, l, n, n, restarts, seed);
    return sup + std::pow(rows.front().value, 1.0 / p);
}

MultiplicativeCheck multiplicative_check(const BallSystem& sys, const SampledFunction& f, const SampledFunction& g,
                                         const PointSet& K, double p, const AdmissibleFn& k, const AdmissibleFn& l,
                                         int n, int restarts, std::uint64_t seed) {
    auto F = std::make_shared<const SampledFunction>(f);
    auto G = std::make_shared<const SampledFunction>(g);
    auto FG = std::make_shared<const SampledFunction>(f * g);
    MultiplicativeCheck mc;
    // identical seeds give identical packings for the three functions
    mc.lhs = seminorm(sys, FG, K, p, k, l, n, restarts, seed);
    mc.rhs = seminorm(sys, F, K, p, k, l, n, restarts, seed) * seminorm(sys, G, K, p, k, l, n, restarts, seed);
    mc.slack = mc.rhs - mc.lhs;
    mc.holds = mc.lhs <= mc.rhs * (1.0 + 1e-12) + 1e-15;
    return mc;
}

// ---- condensers -----------------------------------------------------------------------

namespace {

std::vector<std::size_t> ground_coords(const GridSystem& g, PointId x) { return g.coords(Ball{g.max_depth(), x}); }

std::vector<PointId> face_neighbours(const GridSystem& g, PointId x) {
    auto c = ground_coords(g, x);
    std::vector<PointId> out;
    for (int i = 0; i < g.dim(); ++i) {
        auto I = static_cast<std::size_t>(i);
        const std::size_t n = g.cells(i, g.max_depth());
        for (int s : {-1, 1}) {
            if ((s < 0 && c[I] == 0) || (s > 0 && c[I] + 1 >= n)) continue;
            auto d = c;
            d[I] = s < 0 ? c[I] - 1 : c[I] + 1;
            out.push_back(static_cast<PointId>(g.ball_at(g.max_depth(), d).index));
        }
    }
    return out;
}

}  // namespace

void validate_condenser(const GridSystem& g, const Condenser& cond) {
    for (const PointSet* s : {&cond.C, &cond.d0, &cond.d1})
        for (PointId x : *s)
            if (x >= g.num_points()) throw std::invalid_argument("condenser cell outside the grid");
    if (intersects(cond.d0, cond.d1)) throw std::invalid_argument("boundary sets overlap");
    if (intersects(cond.d0, cond.C) || intersects(cond.d1, cond.C))
        throw std::invalid_argument("boundary sets must be disjoint from C");
    if (cond.C.empty()) return;
    for (const PointSet* s : {&cond.d0, &cond.d1})
        for (PointId x : *s) {
            auto nb = face_neighbours(g, x);
            bool touches = std::any_of(nb.begin(), nb.end(), [&](PointId y) { return contains(cond.C, y); });
            if (!touches) throw std::invalid_argument("boundary cell " + std::to_string(x) + " not adjacent to C");
        }
}

Condenser square_condenser(const GridSystem& g) {
    Condenser c;
    const std::size_t last = g.cells(0, g.max_depth()) - 1;
    for (PointId x = 0; x < g.num_points(); ++x) {
        std::size_t i = ground_coords(g, x)[0];
        (i == 0 ? c.d0 : i == last ? c.d1 : c.C).push_back(x);
    }
    return c;
}

bool condenser_connected(const GridSystem& g, const Condenser& cond) {
    if (cond.d0.empty() || cond.d1.empty()) return false;
    std::vector<char> state(g.num_points(), 0);  // 1 = allowed, 2 = seen
    for (PointId x : cond.C) state[x] = 1;
    for (PointId x : cond.d1) state[x] = 1;
    std::deque<PointId> q;
    for (PointId x : cond.d0) {
        state[x] = 2;
        q.push_back(x);
    }
    while (!q.empty()) {
        PointId x = q.front();
        q.pop_front();
        if (contains(cond.d1, x)) return true;
        for (PointId y : face_neighbours(g, x))
            if (state[y] == 1) {
                state[y] = 2;
                q.push_back(y);
            }
    }
    return false;
}

// ---- capacity -------------------------------------------------------------------------

namespace {

struct Lattice {
    std::vector<std::size_t> extent;  // vertices per axis
    std::vector<std::size_t> stride;
    std::size_t size = 1;

    explicit Lattice(const GridSystem& g) {
        for (int i = 0; i < g.dim(); ++i) {
            stride.push_back(size);
            extent.push_back(g.cells(i, g.max_depth()) + 1);
            size *= extent.back();
        }
    }
    /// vertex of corner c (bit i selects the upper face along axis i) of ground cell x
    std::size_t corner(const GridSystem& g, PointId x, std::size_t c) const {
        auto co = g.coords(Ball{g.max_depth(), x});
        std::size_t v = 0;
        for (std::size_t i = 0; i < co.size(); ++i) v += (co[i] + ((c >> i) & 1u)) * stride[i];
        return v;
    }
};

struct Problem {
    Lattice lat;
    std::vector<std::vector<std::uint32_t>> sets;  // objective vertex sets
    std::vector<double> lo, hi;                     // box constraints per vertex
};

Problem build_problem(const GridSystem& g, const Condenser& cond, const CapacityOptions& opt) {
    Problem P{Lattice(g), {}, {}, {}};
    const std::size_t corners = std::size_t{1} << g.dim();
    P.lo.assign(P.lat.size, 0.0);
    P.hi.assign(P.lat.size, 1.0);
    for (PointId x : cond.d0)
        for (std::size_t c = 0; c < corners; ++c) P.hi[P.lat.corner(g, x, c)] = 0.0;
    for (PointId x : cond.d1)
        for (std::size_t c = 0; c < corners; ++c) {
            std::size_t v = P.lat.corner(g, x, c);
            if (P.hi[v] < 1.0) throw std::invalid_argument("boundary sets share a vertex");
            P.lo[v] = 1.0;
        }
    Packing pk = max_packing(g, cond.C, opt.k, opt.n, 0, opt.n);
    std::vector<char> mark(P.lat.size, 0);
    for (const auto& pr : pk.pairs) {
        std::vector<std::uint32_t> vs;
        for (PointId x : g.realize(g.shift_by(pr.witness, opt.l)))
            for (std::size_t c = 0; c < corners; ++c) {
                std::size_t v = P.lat.corner(g, x, c);
                if (!mark[v]) {
                    mark[v] = 1;
                    vs.push_back(static_cast<std::uint32_t>(v));
                }
            }
        for (auto v : vs) mark[v] = 0;
        P.sets.push_back(std::move(vs));
    }
    return P;
}

double objective(const Problem& P, const std::vector<double>& f, double p, std::vector<double>* grad) {
    double total = 0.0;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    for (const auto& s : P.sets) {
        std::uint32_t imax = s[0], imin = s[0];
        for (auto v : s) {
            if (f[v] > f[imax]) imax = v;
            if (f[v] < f[imin]) imin = v;
        }
        const double o = f[imax] - f[imin];
        total += std::pow(o, p);
        if (grad && o > 0.0) {
            const double d = p * std::pow(o, p - 1.0);
            (*grad)[imax] += d;
            (*grad)[imin] -= d;
        }
    }
    return total;
}

struct Descent {
    std::vector<double> best;
    long iterations = 0;
    bool converged = false;
};

void project(const Problem& P, std::vector<double>& f) {
    for (std::size_t v = 0; v < f.size(); ++v) f[v] = std::clamp(f[v], P.lo[v], P.hi[v]);
}

/// Projected subgradient, step 1/sqrt(t) scaled by the largest gradient component.
Descent subgradient_descent(const Problem& P, const CapacityOptions& opt, std::vector<double> f) {
    Descent out;
    std::vector<double> grad(f.size());
    double best_F = objective(P, f, opt.p, &grad);
    out.best = f;
    double window_start = best_F;
    const long window = 2000;
    long it = 0;
    for (; it < opt.max_iterations; ++it) {
        double norm = 0.0;
        for (double d : grad) norm = std::max(norm, std::abs(d));
        if (norm == 0.0) {
            out.converged = true;
            break;
        }
        const double step = 0.25 / std::sqrt(static_cast<double>(it + 1)) / norm;
        for (std::size_t v = 0; v < f.size(); ++v) f[v] -= step * grad[v];
        project(P, f);
        double F = objective(P, f, opt.p, &grad);
        if (F < best_F) {
            best_F = F;
            out.best = f;
        }
        if ((it + 1) % window == 0) {
            if (window_start - best_F <= opt.tol * best_F) {
                out.converged = true;
                ++it;
                break;
            }
            window_start = best_F;
        }
    }
    out.iterations = it;
    return out;
}

/// sum_a S_a^p with S_a = softmax_beta - softmin_beta of f on a (an upper bound on the oscillation).
double smoothed(const Problem& P, const std::vector<double>& f, double p, double beta, std::vector<double>* grad) {
    double total = 0.0;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    std::vector<double> wp, wm;
    for (const auto& s : P.sets) {
        double mx = f[s[0]], mn = f[s[0]];
        for (auto v : s) {
            mx = std::max(mx, f[v]);
            mn = std::min(mn, f[v]);
        }
        wp.resize(s.size());
        wm.resize(s.size());
        double zp = 0.0, zm = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            wp[i] = std::exp(beta * (f[s[i]] - mx));
            wm[i] = std::exp(-beta * (f[s[i]] - mn));
            zp += wp[i];
            zm += wm[i];
        }
        const double S = (mx - mn) + (std::log(zp) + std::log(zm)) / beta;
        total += std::pow(S, p);
        if (grad) {
            const double d = p * std::pow(S, p - 1.0);
            for (std::size_t i = 0; i < s.size(); ++i) (*grad)[s[i]] += d * (wp[i] / zp - wm[i] / zm);
        }
    }
    return total;
}

/// Accelerated projected gradient on the smoothed objective, doubling beta between stages.
Descent smoothed_descent(const Problem& P, const CapacityOptions& opt, std::vector<double> f) {
    Descent out;
    const std::size_t V = f.size();
    std::size_t largest = 1;
    for (const auto& s : P.sets) largest = std::max(largest, s.size());
    // typical oscillation scale: one packing set out of a row of them
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(P.sets.size(), 1)));
    double beta = 4.0 / scale;
    const double beta_end = 2.0 * std::log(static_cast<double>(largest)) / (opt.tol * scale);
    out.best = f;
    double best_F = objective(P, f, opt.p, nullptr);
    std::vector<double> x = f, xprev = f, y(V), gy(V), xn(V);
    double L = 1.0;
    long it = 0;
    while (it < opt.max_iterations) {
        double t = 1.0, last = kInfinity;
        for (long inner = 0; inner < 20000 && it < opt.max_iterations; ++inner, ++it) {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            for (std::size_t v = 0; v < V; ++v) y[v] = x[v] + (t - 1.0) / tn * (x[v] - xprev[v]);
            project(P, y);
            const double Gy = smoothed(P, y, opt.p, beta, &gy);
            double Gn;
            for (;;) {
                for (std::size_t v = 0; v < V; ++v) xn[v] = y[v] - gy[v] / L;
                project(P, xn);
                Gn = smoothed(P, xn, opt.p, beta, nullptr);
                double lin = 0.0, sq = 0.0;
                for (std::size_t v = 0; v < V; ++v) {
                    lin += gy[v] * (xn[v] - y[v]);
                    sq += (xn[v] - y[v]) * (xn[v] - y[v]);
                }
                if (Gn <= Gy + lin + 0.5 * L * sq + 1e-15 * std::abs(Gy) || L > 1e18) break;
                L *= 2.0;
            }
            xprev = x;
            x = xn;
            // restart momentum when the objective goes up
            t = Gn > last ? 1.0 : tn;
            if (inner % 50 == 49) {
                if (std::abs(last - Gn) <= 1e-9 * Gn) break;
            }
            last = Gn;
            L *= 0.9;
        }
        double F = objective(P, x, opt.p, nullptr);
        if (F < best_F) {
            best_F = F;
            out.best = x;
        }
        if (beta >= beta_end) {
            out.converged = it < opt.max_iterations;
            break;
        }
        beta *= 2.0;
    }
    out.iterations = it;
    return out;
}

SampledFunction corner_samples(const GridSystem& g, const Lattice& lat, const std::vector<double>& f) {
    SampledFunction s;
    s.name = "capacity";
    s.per_point = std::size_t{1} << g.dim();
    s.re.resize(g.num_points() * s.per_point);
    for (PointId x = 0; x < g.num_points(); ++x)
        for (std::size_t c = 0; c < s.per_point; ++c) s.re[x * s.per_point + c] = f[lat.corner(g, x, c)];
    return s;
}

}  // namespace

double capacity_objective(const GridSystem& g, const Condenser& cond, const CapacityOptions& opt,
                          const std::vector<double>& vertex_values) {
    Problem P = build_problem(g, cond, opt);
    if (vertex_values.size() != P.lat.size) throw std::invalid_argument("vertex vector size mismatch");
    std::vector<double> f = vertex_values;
    for (std::size_t v = 0; v < f.size(); ++v)
        if (f[v] < P.lo[v] || f[v] > P.hi[v]) throw std::invalid_argument("candidate violates the boundary values");
    return objective(P, f, opt.p, nullptr);
}

CapacityResult capacity(const GridSystem& g, const Condenser& cond, const CapacityOptions& opt) {
    if (!(opt.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
    validate_condenser(g, cond);
    CapacityResult res;
    if (cond.C.empty() || !condenser_connected(g, cond)) {
        res.disconnected = !cond.C.empty();
        res.converged = true;
        res.diagnostic = cond.C.empty() ? "empty condenser" : "no chain of cells joins the boundary sets";
        return res;
    }
    Problem P = build_problem(g, cond, opt);
    const std::size_t V = P.lat.size;
    std::vector<double> f(V);
    for (std::size_t v = 0; v < V; ++v) f[v] = std::clamp(0.5, P.lo[v], P.hi[v]);
    Descent d = opt.method == CapacityMethod::subgradient ? subgradient_descent(P, opt, f) : smoothed_descent(P, opt, f);
    res.iterations = d.iterations;
    res.converged = d.converged;
    res.value = objective(P, d.best, opt.p, nullptr);
    res.vertex_values = d.best;
    res.f = corner_samples(g, P.lat, d.best);
    if (!res.converged) res.diagnostic = "iteration cap reached";
    return res;
}

CapacityGap capacity_modulus_gap(const GridSystem& g, const Condenser& cond, const CurveFamily& joining,
                                 const ModulusOptions& mod, const CapacityOptions& cap) {
    CapacityGap out;
    CapacityResult c = capacity(g, cond, cap);
    if (c.disconnected || cond.C.empty()) {
        out.disconnected = c.disconnected;
        out.holds = true;
        return out;
    }
    ModulusReport r = solve_packing_modulus(g, joining, mod);
    out.pmod = r.value;
    out.cap = c.value;
    out.vertex_values = std::move(c.vertex_values);
    out.gap = out.cap - out.pmod;
    out.holds = out.gap >= -2.0 * std::max(mod.tol, cap.tol);
    return out;
}

ThresholdScan coordinate_threshold_scan(const GridSystem& g, int axis, const std::vector<double>& p_grid, int n_lo,
                                        int n_hi, const AdmissibleFn& k, const AdmissibleFn& l, int restarts) {
    if (axis < 1 || axis > g.dim()) throw std::out_of_range("axis out of range");
    if (p_grid.size() < 2 || !std::is_sorted(p_grid.begin(), p_grid.end()))
        throw std::invalid_argument("p grid must be ascending with at least two points");
    ThresholdScan scan;
    scan.expected = g.trace() / g.mu()[static_cast<std::size_t>(axis - 1)];
    auto f = std::make_shared<const SampledFunction>(SampledFunction::coordinate(g, axis - 1));
    Gauge phi = Gauge::oscillation(f);
    const PointSet K = g.all_points();
    auto fits_for = [&](const std::vector<double>& ps) {
        std::vector<double> ns;
        std::vector<std::vector<double>> logs(ps.size());
        for (int n = n_lo; n <= n_hi; ++n) {
            ns.push_back(n);
            auto pcs = packing_precontent_multi(g, phi, ps, k, l, n, K, restarts);
            for (std::size_t i = 0; i < ps.size(); ++i) logs[i].push_back(std::log(std::max(pcs[i].value, 1e-300)));
        }
        std::vector<SlopeFit> out;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            SlopeFit fit = fit_slope(ns, logs[i]);
            fit.p = ps[i];
            out.push_back(fit);
        }
        return out;
    };
    auto bracket = [](const std::vector<SlopeFit>& fits) {
        for (std::size_t i = 0; i + 1 < fits.size(); ++i)
            if (fits[i].slope > 0.0 && fits[i + 1].slope <= 0.0) return i;
        return fits.size();
    };
    scan.fits = fits_for(p_grid);
    std::size_t i = bracket(scan.fits);
    if (i < scan.fits.size()) {
        // refine inside the bracket, then a secant step
        std::vector<double> fine;
        for (int j = 0; j <= 16; ++j) fine.push_back(scan.fits[i].p + (scan.fits[i + 1].p - scan.fits[i].p) * j / 16.0);
        auto ff = fits_for(fine);
        std::size_t t = bracket(ff);
        if (t < ff.size()) {
            const auto &a = ff[t], &b = ff[t + 1];
            scan.threshold = a.p + a.slope / (a.slope - b.slope) * (b.p - a.p);
            scan.crossover = true;
        }
    }
    if (!scan.crossover) scan.threshold = scan.fits.front().slope > 0.0 ? p_grid.back() : p_grid.front();
    return scan;
}

}  // namespace sqc
