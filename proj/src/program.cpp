#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sqc/modulus.hpp"

namespace sqc {

namespace {

using Row = std::vector<std::pair<std::uint32_t, double>>;

struct Evaluation {
    double primal = kInfinity;
    double dual = 0.0;
    double gap = kInfinity;
    double min_row = 0.0;
};

double row_value(const Row& row, const std::vector<double>& x) {
    double v = 0.0;
    for (auto [g, a] : row) v += a * x[g];
    return v;
}

/// Scales x onto the feasible region and returns its objective.
double feasible_primal(const Program& prog, const std::vector<char>& active, const std::vector<double>& x, double p,
                       double* min_row) {
    double m = kInfinity;
    for (std::size_t r = 0; r < prog.rows.size(); ++r)
        if (active[r]) m = std::min(m, row_value(prog.rows[r], x));
    *min_row = m;
    if (!(m > 0.0)) return kInfinity;
    double P = 0.0;
    for (std::size_t g = 0; g < prog.vars; ++g)
        if (prog.w[g] > 0.0 && x[g] > 0.0) P += prog.w[g] * std::pow(x[g] / m, p);
    return P;
}

double relative_gap(double P, double D) {
    if (P == kInfinity) return kInfinity;
    if (P <= 0.0) return 0.0;
    return std::max(0.0, (P - D) / P);
}

/// Solves sum_j a_j max(0, c_j + t mu a_j) = 1 for mu >= 0 (piecewise linear, nondecreasing).
double solve_piecewise(const std::vector<double>& a, const std::vector<double>& c, double t) {
    const std::size_t k = a.size();
    auto f = [&](double mu) {
        double v = 0.0;
        for (std::size_t j = 0; j < k; ++j) v += a[j] * std::max(0.0, c[j] + t * mu * a[j]);
        return v;
    };
    if (f(0.0) >= 1.0) return 0.0;
    std::vector<double> bp;
    bp.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
        if (a[j] > 0.0) bp.push_back(std::max(0.0, -c[j] / (t * a[j])));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    double lo = 0.0, flo = f(0.0);
    for (double b : bp) {
        if (b <= lo) continue;
        double fb = f(b);
        if (fb >= 1.0) return lo + (1.0 - flo) * (b - lo) / (fb - flo);
        lo = b;
        flo = fb;
    }
    // beyond the last breakpoint every term is active
    double slope = 0.0;
    for (std::size_t j = 0; j < k; ++j) slope += t * a[j] * a[j];
    return lo + (1.0 - flo) / slope;
}

ProgramSolution solve_smooth(const Program& prog, const std::vector<char>& active, double p, double tol,
                             long max_sweeps, std::vector<double> lambda) {
    const std::size_t G = prog.vars, R = prog.rows.size();
    const double q = 1.0 / (p - 1.0);
    const auto& w = prog.w;
    auto xof = [&](std::size_t g, double s) { return s > 0.0 ? std::pow(s / (p * w[g]), q) : 0.0; };

    std::vector<double> s(G, 0.0);
    for (std::size_t r = 0; r < R; ++r)
        if (active[r])
            for (auto [g, a] : prog.rows[r]) s[g] += lambda[r] * a;

    ProgramSolution sol;
    std::vector<double> x(G, 0.0);
    auto evaluate = [&]() {
        double dualsum = 0.0, wx = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
            x[g] = w[g] > 0.0 ? xof(g, s[g]) : 0.0;
            if (w[g] > 0.0) wx += w[g] * std::pow(x[g], p);
        }
        for (std::size_t r = 0; r < R; ++r)
            if (active[r]) dualsum += lambda[r];
        Evaluation e;
        e.primal = feasible_primal(prog, active, x, p, &e.min_row);
        e.dual = dualsum + (1.0 - p) * wx;
        e.gap = relative_gap(e.primal, e.dual);
        return e;
    };

    std::vector<double> base;
    Evaluation ev = evaluate();
    long sweep = 0;
    while (!(ev.gap <= tol) && sweep < max_sweeps) {
        ++sweep;
        for (std::size_t r = 0; r < R; ++r) {
            if (!active[r]) continue;
            const Row& row = prog.rows[r];
            const double lam = lambda[r];
            base.resize(row.size());
            for (std::size_t j = 0; j < row.size(); ++j) base[j] = std::max(0.0, s[row[j].first] - lam * row[j].second);
            auto f = [&](double mu) {
                double v = 0.0;
                for (std::size_t j = 0; j < row.size(); ++j)
                    v += row[j].second * xof(row[j].first, base[j] + mu * row[j].second);
                return v;
            };
            double mu = 0.0;
            const double f0 = f(0.0);
            if (f0 < 1.0) {
                if (p == 2.0) {
                    double slope = 0.0;
                    for (auto [g, a] : row) slope += a * a / (2.0 * w[g]);
                    mu = (1.0 - f0) / slope;
                } else {
                    double lo = 0.0, hi = lam > 0.0 ? lam : 1e-12;
                    for (int it = 0; it < 4000 && f(hi) < 1.0; ++it) {
                        lo = hi;
                        hi *= 2.0;
                    }
                    // safeguarded Newton on [lo, hi]
                    mu = 0.5 * (lo + hi);
                    for (int it = 0; it < 200; ++it) {
                        double fv = f(mu) - 1.0;
                        if (fv == 0.0) break;
                        if (fv < 0.0)
                            lo = mu;
                        else
                            hi = mu;
                        double d = 0.0;
                        for (std::size_t j = 0; j < row.size(); ++j) {
                            double u = base[j] + mu * row[j].second;
                            double ww = p * w[row[j].first];
                            if (u > 0.0) d += row[j].second * row[j].second * q / ww * std::pow(u / ww, q - 1.0);
                        }
                        double next = d > 0.0 ? mu - fv / d : 0.5 * (lo + hi);
                        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                        if (std::abs(next - mu) <= 1e-16 * std::max(1.0, mu) || hi - lo <= 1e-17 * hi) {
                            mu = next;
                            break;
                        }
                        mu = next;
                    }
                }
            }
            for (std::size_t j = 0; j < row.size(); ++j) s[row[j].first] = base[j] + mu * row[j].second;
            lambda[r] = mu;
        }
        ev = evaluate();
    }
    sol.iterations = sweep;
    sol.converged = ev.gap <= tol;
    sol.primal = ev.primal;
    sol.dual = ev.dual;
    sol.gap = ev.gap;
    sol.x.assign(G, 0.0);
    if (ev.min_row > 0.0)
        for (std::size_t g = 0; g < G; ++g) sol.x[g] = x[g] / ev.min_row;
    sol.lambda = std::move(lambda);
    return sol;
}

/// p = 1: proximal point iterations, each solved by cyclic projections (Hildreth).
ProgramSolution solve_linear(const Program& prog, const std::vector<char>& active, double tol, long max_sweeps,
                             std::vector<double> lambda) {
    const std::size_t G = prog.vars, R = prog.rows.size();
    const auto& w = prog.w;
    std::vector<double> s(G, 0.0), xk(G, 0.0), x(G, 0.0);
    for (std::size_t r = 0; r < R; ++r)
        if (active[r])
            for (auto [g, a] : prog.rows[r]) s[g] += lambda[r] * a;
    double tau = 1.0;
    ProgramSolution sol;
    Evaluation ev;
    long sweep = 0;
    std::vector<double> av, cv;
    auto certificate = [&]() {
        Evaluation e;
        x = xk;
        e.primal = feasible_primal(prog, active, x, 1.0, &e.min_row);
        double theta = 0.0, sum = 0.0;
        for (std::size_t g = 0; g < G; ++g)
            if (w[g] > 0.0) theta = std::max(theta, s[g] / w[g]);
        for (std::size_t r = 0; r < R; ++r)
            if (active[r]) sum += lambda[r];
        e.dual = theta > 0.0 ? sum / theta : 0.0;
        e.gap = relative_gap(e.primal, e.dual);
        return e;
    };
    ev = certificate();
    while (!(ev.gap <= tol) && sweep < max_sweeps) {
        for (int inner = 0; inner < 25 && sweep < max_sweeps; ++inner, ++sweep) {
            double change = 0.0;
            for (std::size_t r = 0; r < R; ++r) {
                if (!active[r]) continue;
                const Row& row = prog.rows[r];
                const double lam = lambda[r];
                av.resize(row.size());
                cv.resize(row.size());
                for (std::size_t j = 0; j < row.size(); ++j) {
                    auto [g, a] = row[j];
                    av[j] = a;
                    cv[j] = xk[g] + tau * (s[g] - lam * a - w[g]);
                }
                double mu = solve_piecewise(av, cv, tau);
                for (auto [g, a] : row) s[g] += (mu - lam) * a;
                change = std::max(change, std::abs(mu - lam));
                lambda[r] = mu;
            }
            if (change <= 1e-15) break;
        }
        for (std::size_t g = 0; g < G; ++g) xk[g] = w[g] > 0.0 ? std::max(0.0, xk[g] + tau * (s[g] - w[g])) : 0.0;
        ev = certificate();
        tau = std::min(tau * 2.0, 1e8);
    }
    sol.iterations = sweep;
    sol.converged = ev.gap <= tol;
    sol.primal = ev.primal;
    sol.dual = ev.dual;
    sol.gap = ev.gap;
    sol.x.assign(G, 0.0);
    if (ev.min_row > 0.0)
        for (std::size_t g = 0; g < G; ++g) sol.x[g] = x[g] / ev.min_row;
    double theta = 0.0;
    for (std::size_t g = 0; g < G; ++g)
        if (w[g] > 0.0) theta = std::max(theta, s[g] / w[g]);
    if (theta > 0.0)
        for (double& l : lambda) l /= theta;
    sol.lambda = std::move(lambda);
    return sol;
}

}  // namespace

ProgramSolution solve_program(const Program& prog, double p, double tol, long max_sweeps,
                              const std::vector<double>& lambda0) {
    if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
    if (prog.w.size() != prog.vars) throw std::invalid_argument("weight vector size mismatch");
    const std::size_t R = prog.rows.size();
    std::vector<char> active(R, 1);
    std::vector<double> free_value(prog.vars, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        bool any = false;
        for (auto [g, a] : prog.rows[r]) {
            if (g >= prog.vars || a < 0.0 || !std::isfinite(a)) throw std::invalid_argument("malformed program row");
            if (a <= 0.0) continue;
            any = true;
            if (prog.w[g] <= 0.0) {
                active[r] = 0;
                free_value[g] = std::max(free_value[g], 1.0 / a);
            }
        }
        if (!any) {
            ProgramSolution bad;
            bad.primal = kInfinity;
            bad.gap = kInfinity;
            bad.lambda.assign(R, 0.0);
            return bad;
        }
    }
    ProgramSolution sol;
    const std::size_t live = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
    if (live == 0) {
        sol.x.assign(prog.vars, 0.0);
        sol.lambda.assign(R, 0.0);
        sol.converged = true;
    } else {
        std::vector<double> lambda(R, 1.0 / static_cast<double>(live));
        if (!lambda0.empty())
            for (std::size_t r = 0; r < R; ++r) lambda[r] = r < lambda0.size() ? std::max(0.0, lambda0[r]) : 0.0;
        for (std::size_t r = 0; r < R; ++r)
            if (!active[r]) lambda[r] = 0.0;
        sol = p == 1.0 ? solve_linear(prog, active, tol, max_sweeps, std::move(lambda))
                       : solve_smooth(prog, active, p, tol, max_sweeps, std::move(lambda));
    }
    for (std::size_t g = 0; g < prog.vars; ++g)
        if (prog.w[g] <= 0.0) sol.x[g] = free_value[g];
    return sol;
}

}  // namespace sqc
