#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace oracle {

using namespace sqc;

std::vector<Row> arc_cover_rows(const BallSystem& sys, const CurveFamily& fam, int n, bool* uncoverable) {
    *uncoverable = false;
    std::set<Row> rows;
    const std::size_t nb = sys.num_balls(n);
    for (const auto& curve : fam.curves) {
        const std::size_t L = curve.size();
        struct Arc {
            std::size_t first, last, ball;
        };
        std::vector<Arc> arcs;
        for (std::size_t b = 0; b < nb; ++b) {
            PointSet r = sys.realize(Ball{n, b});
            std::size_t t = 0;
            while (t < L) {
                if (!std::binary_search(r.begin(), r.end(), curve[t])) {
                    ++t;
                    continue;
                }
                std::size_t u = t;
                while (u + 1 < L && std::binary_search(r.begin(), r.end(), curve[u + 1])) ++u;
                arcs.push_back({t, u, b});
                t = u + 1;
            }
        }
        for (std::size_t t = 0; t < L; ++t) {
            bool hit = std::any_of(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.first <= t && t <= a.last; });
            if (!hit) {
                *uncoverable = true;
                return {};
            }
        }
        Row cur;
        std::function<void(std::size_t)> extend = [&](std::size_t next) {
            if (next >= L) {
                rows.insert(cur);
                return;
            }
            for (const Arc& a : arcs) {
                if (a.first > next || a.last < next) continue;
                cur[a.ball] += 1.0;
                extend(a.last + 1);
                if ((cur[a.ball] -= 1.0) == 0.0) cur.erase(a.ball);
            }
        };
        extend(0);
    }
    return {rows.begin(), rows.end()};
}

namespace {

// Solves H d = g for a symmetric positive definite H (Cholesky); false if not SPD.
bool cholesky_solve(std::vector<double> H, std::vector<double>& g, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = H[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= H[j * n + k] * H[j * n + k];
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        H[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = H[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= H[i * n + k] * H[j * n + k];
            H[i * n + j] = s / d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = g[i];
        for (std::size_t k = 0; k < i; ++k) s -= H[i * n + k] * g[k];
        g[i] = s / H[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = g[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= H[k * n + i] * g[k];
        g[i] = s / H[i * n + i];
    }
    return true;
}

}  // namespace

Bracket barrier_min_power(const std::vector<Row>& rows, double p) {
    Bracket out;
    if (rows.empty()) {
        out.ok = true;
        return out;
    }
    std::map<std::size_t, std::size_t> id;
    for (const auto& r : rows)
        for (const auto& [b, a] : r) id.emplace(b, id.size());
    const std::size_t n = id.size(), m = rows.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> A(m);
    for (std::size_t r = 0; r < m; ++r)
        for (const auto& [b, a] : rows[r]) A[r].push_back({id[b], a});

    std::vector<double> x(n, 2.0), s(m);
    auto slacks = [&](const std::vector<double>& y, std::vector<double>& out_s) {
        for (std::size_t r = 0; r < m; ++r) {
            double v = -1.0;
            for (auto [j, a] : A[r]) v += a * y[j];
            out_s[r] = v;
        }
    };
    auto barrier = [&](const std::vector<double>& y, double t) {
        std::vector<double> sy(m);
        slacks(y, sy);
        double v = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(y[j] > 0.0)) return std::numeric_limits<double>::infinity();
            v += t * std::pow(y[j], p) - std::log(y[j]);
        }
        for (double q : sy) {
            if (!(q > 0.0)) return std::numeric_limits<double>::infinity();
            v -= std::log(q);
        }
        return v;
    };
    auto primal = [&](const std::vector<double>& y) {
        double v = 0.0;
        for (double q : y) v += std::pow(q, p);
        return v;
    };
    auto dual = [&](double t) {
        std::vector<double> c(n, 0.0);
        double sum = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            double lam = 1.0 / (t * s[r]);
            sum += lam;
            for (auto [j, a] : A[r]) c[j] += lam * a;
        }
        double v = sum;
        for (double cj : c) v -= (p - 1.0) * std::pow(cj / p, p / (p - 1.0));
        return v;
    };

    out.primal = std::numeric_limits<double>::infinity();
    out.dual = 0.0;
    // keep the best bracket seen: rounding stalls the centering once t is huge
    for (double t = 1.0; t < 1e15; t *= 4.0) {
        for (int it = 0; it < 200; ++it) {
            slacks(x, s);
            std::vector<double> g(n), H(n * n, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                g[j] = t * p * std::pow(x[j], p - 1.0) - 1.0 / x[j];
                H[j * n + j] = t * p * (p - 1.0) * std::pow(x[j], p - 2.0) + 1.0 / (x[j] * x[j]);
            }
            for (std::size_t r = 0; r < m; ++r) {
                for (auto [j, a] : A[r]) g[j] -= a / s[r];
                for (auto [i, ai] : A[r])
                    for (auto [j, aj] : A[r]) H[i * n + j] += ai * aj / (s[r] * s[r]);
            }
            std::vector<double> d = g;
            if (!cholesky_solve(H, d, n)) return out;
            double dec = 0.0;
            for (std::size_t j = 0; j < n; ++j) dec += g[j] * d[j];
            if (dec < 1e-18) break;
            double step = 1.0, f0 = barrier(x, t);
            std::vector<double> y(n);
            for (int bt = 0; bt < 100; ++bt, step *= 0.5) {
                for (std::size_t j = 0; j < n; ++j) y[j] = x[j] - step * d[j];
                const double fy = barrier(y, t);
                // near the centre the decrease drowns in the rounding of t * f; take any feasible step
                if (fy <= f0 - 0.25 * step * dec || (dec < 1e-2 && std::isfinite(fy))) break;
            }
            x = y;
        }
        slacks(x, s);
        out.primal = std::min(out.primal, primal(x));
        out.dual = std::max(out.dual, dual(t));
        if (out.primal - out.dual <= 1e-13 * out.primal) break;
    }
    out.ok = std::isfinite(out.primal) && std::isfinite(out.dual) && out.primal - out.dual <= 1e-8 * out.primal;
    return out;
}

bool realizations_disjoint(const BallSystem& sys, const std::vector<Ball>& balls) {
    std::vector<int> owner(sys.num_points(), -1);
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (PointId x : sys.realize(balls[i])) {
            if (owner[x] >= 0) return false;
            owner[x] = static_cast<int>(i);
        }
    return true;
}

bool shifted_union_covers(const BallSystem& sys, const std::vector<Ball>& balls, const PointSet& A) {
    std::vector<char> hit(sys.num_points(), 0);
    for (const Ball& b : balls)
        for (PointId x : sys.realize(sys.shift(b, sys.q()(b.depth)))) hit[x] = 1;
    return std::all_of(A.begin(), A.end(), [&](PointId x) { return hit[x] != 0; });
}

double tiling_seminorm(const GridSystem& g, const SampledFunction& f, double p, int n) {
    double sup = 0.0;
    for (double v : f.re) sup = std::max(sup, std::abs(v));
    double sum = 0.0;
    for (std::size_t i = 0; i < g.num_balls(n); ++i) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (PointId x : g.realize(Ball{n, i}))
            for (std::size_t j = 0; j < f.per_point; ++j) {
                double v = f.re[x * f.per_point + j];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        sum += std::pow(hi - lo, p);
    }
    return sup + std::pow(sum, 1.0 / p);
}

}  // namespace oracle
