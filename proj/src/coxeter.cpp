#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "sqc/spaces.hpp"

namespace sqc {

bool CoxeterPolygonSpec::right_angled() const {
    for (int i = 0; i < r; ++i)
        if (order(i) != 2) return false;
    return true;
}

bool CoxeterPolygonSpec::hyperbolic() const {
    double s = 0.0;
    for (int i = 0; i < r; ++i) s += std::numbers::pi / order(i);
    return s < (r - 2) * std::numbers::pi - 1e-12;
}

std::vector<double> CoxeterPolygonSpec::weights() const {
    std::vector<double> w(static_cast<std::size_t>(r), 1.0);
    if (!thickness.empty())
        for (int i = 0; i < r; ++i) w[static_cast<std::size_t>(i)] = std::log(thickness[static_cast<std::size_t>(i)] - 1.0);
    return w;
}

void CoxeterPolygonSpec::validate() const {
    if (r < 3) throw std::invalid_argument("polygon needs r >= 3 sides");
    if (!m.empty() && m.size() != static_cast<std::size_t>(r)) throw std::invalid_argument("need one angle order per vertex");
    for (int v : m)
        if (v < 2) throw std::invalid_argument("angle orders must be >= 2");
    if (!thickness.empty()) {
        if (thickness.size() != static_cast<std::size_t>(r)) throw std::invalid_argument("need one thickness per side");
        for (double q : thickness)
            if (!(q >= 2.0)) throw std::invalid_argument("thickness must be >= 2");
        // odd dihedral orders make the two generators conjugate
        for (int i = 0; i < r; ++i)
            if (order(i) % 2 == 1 &&
                thickness[static_cast<std::size_t>(i)] != thickness[static_cast<std::size_t>((i + 1) % r)])
                throw std::invalid_argument("odd angle order needs equal thickness on both sides");
    }
}

namespace {

using Poly = std::vector<long long>;

Poly mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// Exact quotient a / d for d with constant term 1.
Poly divexact(const Poly& a, const Poly& d) {
    if (d.empty() || d[0] != 1) throw std::logic_error("divisor must have constant term 1");
    if (a.size() < d.size()) throw std::logic_error("inexact polynomial division");
    Poly q(a.size() - d.size() + 1, 0), rem = a;
    for (std::size_t k = 0; k < q.size(); ++k) {
        q[k] = rem[k];
        for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= q[k] * d[j];
    }
    for (long long v : rem)
        if (v != 0) throw std::logic_error("inexact polynomial division");
    return q;
}

void add_to(Poly& a, const Poly& b, long long sign, std::size_t shift) {
    if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] += sign * b[i];
}

long double eval(const Poly& p, long double t) {
    long double v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * t + static_cast<long double>(p[i]);
    return v;
}

Poly q_integer(int m) { return Poly(static_cast<std::size_t>(m), 1); }  // 1 + t + ... + t^{m-1}

void trim(Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

/// Smallest root of p in (0, 1]; 1 when none (a double root at 1 counts).
double smallest_positive_root(const Poly& p, bool* found) {
    const int steps = 20000;
    long double prev = eval(p, 0.0L);
    for (int i = 1; i <= steps; ++i) {
        long double t = static_cast<long double>(i) / steps;
        long double v = eval(p, t);
        if (v == 0 || (v < 0) != (prev < 0)) {
            long double lo = static_cast<long double>(i - 1) / steps, hi = t;
            if (v != 0)
                for (int it = 0; it < 200; ++it) {
                    long double mid = 0.5L * (lo + hi);
                    if ((eval(p, mid) < 0) == (prev < 0))
                        lo = mid;
                    else
                        hi = mid;
                }
            *found = true;
            return static_cast<double>(v == 0 ? t : 0.5L * (lo + hi));
        }
        prev = v;
    }
    *found = false;
    return 1.0;
}

CoxeterGrowth series_growth(const CoxeterPolygonSpec& spec) {
    CoxeterGrowth g;
    g.method = GrowthMethod::series;
    const int r = spec.r;
    std::vector<int> orders;
    for (int i = 0; i < r; ++i) orders.push_back(spec.order(i));
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    // common multiple of all spherical Poincare polynomials
    Poly P{1, 1};
    for (int m : orders) P = mul(P, mul(Poly{1, 1}, q_integer(m)));
    Poly N;
    add_to(N, P, 1, 0);
    add_to(N, divexact(P, Poly{1, 1}), -r, 1);
    for (int i = 0; i < r; ++i) {
        int m = spec.order(i);
        add_to(N, divexact(P, mul(Poly{1, 1}, q_integer(m))), 1, static_cast<std::size_t>(m));
    }
    trim(N);
    g.numerator = P;
    g.denominator = N;
    bool found = false;
    g.r_star = smallest_positive_root(N, &found);
    g.hyperbolic = spec.hyperbolic();
    g.omega = found && g.r_star < 1.0 ? -std::log(g.r_star) : 0.0;
    if (!g.hyperbolic) g.diagnostic = "not hyperbolic: angle sum >= (r-2) pi";
    return g;
}

struct Word {
    static bool commute(int a, int b, int r) {
        int d = std::abs(a - b);
        return d == 1 || d == r - 1;
    }
};

/// Lexicographically least word in the commutation class.
std::string canonical(const std::string& w, int r) {
    std::string rest = w, out;
    out.reserve(w.size());
    while (!rest.empty()) {
        std::size_t best = std::string::npos;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            bool free = true;
            for (std::size_t j = 0; j < i && free; ++j) free = Word::commute(rest[j], rest[i], r);
            if (free && (best == std::string::npos || rest[i] < rest[best])) best = i;
        }
        out.push_back(rest[best]);
        rest.erase(best, 1);
    }
    return out;
}

bool right_descent(const std::string& w, int s, int r) {
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i] == s) return true;
        if (!Word::commute(w[i], s, r)) return false;
    }
    return false;
}

CoxeterGrowth bfs_growth(const CoxeterPolygonSpec& spec, int n_max, std::size_t max_states) {
    if (!spec.right_angled()) throw std::invalid_argument("bfs growth supports right-angled polygons only");
    CoxeterGrowth g;
    g.method = GrowthMethod::bfs;
    g.hyperbolic = spec.hyperbolic();
    const int r = spec.r;
    std::unordered_set<std::string> frontier{std::string()}, next;
    g.sphere.push_back(1);
    g.cumulative.push_back(1);
    for (int n = 1; n <= n_max; ++n) {
        next.clear();
        for (const auto& w : frontier)
            for (int s = 0; s < r; ++s) {
                if (right_descent(w, s, r)) continue;
                std::string ws = w;
                ws.push_back(static_cast<char>(s));
                next.insert(canonical(ws, r));
            }
        if (next.size() > max_states) {
            g.partial = true;
            g.diagnostic = "state budget exceeded at length " + std::to_string(n);
            break;
        }
        g.sphere.push_back(next.size());
        g.cumulative.push_back(g.cumulative.back() + next.size());
        frontier.swap(next);
    }
    // regression of log cumulative counts over the upper half
    const int top = static_cast<int>(g.cumulative.size()) - 1;
    std::vector<double> ns, ys;
    for (int n = top / 2; n <= top; ++n) {
        ns.push_back(n);
        ys.push_back(std::log(static_cast<double>(g.cumulative[static_cast<std::size_t>(n)])));
    }
    if (ns.size() >= 2) g.omega = fit_slope(ns, ys).slope;
    return g;
}

/// 1 / W_T at y for a spherical subset: vertex i, or edge (i, i+1) when j >= 0.
double inverse_poincare(const std::vector<double>& y, int i, int j, int m) {
    if (j < 0) return 1.0 / (1.0 + y[static_cast<std::size_t>(i)]);
    const double a = y[static_cast<std::size_t>(i)], b = y[static_cast<std::size_t>(j)];
    double sum = 1.0;
    for (int len = 1; len < m; ++len) {
        int hi = (len + 1) / 2, lo = len / 2;
        sum += std::pow(a, hi) * std::pow(b, lo) + std::pow(b, hi) * std::pow(a, lo);
    }
    sum += std::pow(a, (m + 1) / 2) * std::pow(b, m / 2);
    return 1.0 / sum;
}

}  // namespace

double weighted_growth_rate(const CoxeterPolygonSpec& spec) {
    spec.validate();
    const auto w = spec.weights();
    const int r = spec.r;
    double wmin = kInfinity;
    for (double v : w)
        if (v > 0.0) wmin = std::min(wmin, v);
    if (wmin == kInfinity) return kInfinity;
    std::vector<double> y(static_cast<std::size_t>(r));
    auto f = [&](double s) {
        for (int i = 0; i < r; ++i) y[static_cast<std::size_t>(i)] = std::exp(s * w[static_cast<std::size_t>(i)]);
        double v = 1.0;
        for (int i = 0; i < r; ++i) v -= inverse_poincare(y, i, -1, 0);
        for (int i = 0; i < r; ++i) v += inverse_poincare(y, i, (i + 1) % r, spec.order(i));
        return v;
    };
    // largest zero of the reciprocal series along the ray
    double hi = 60.0 / wmin;
    const int steps = 20000;
    for (int k = 1; k <= steps; ++k) {
        double lo = hi * (1.0 - 1.0 / 64.0);
        if (lo < 1e-12) break;
        if (f(lo) <= 0.0) {
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                (f(mid) > 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        hi = lo;
    }
    return 0.0;
}

CoxeterGrowth coxeter_growth(const CoxeterPolygonSpec& spec, GrowthMethod method, int n_max, std::size_t max_states) {
    spec.validate();
    CoxeterGrowth g = method == GrowthMethod::series ? series_growth(spec) : bfs_growth(spec, n_max, max_states);
    const auto w = spec.weights();
    const bool constant = std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
    if (constant) {
        g.T = w.front() > 0.0 ? g.omega / w.front() : kInfinity;
    } else {
        g.T = weighted_growth_rate(spec);
        g.experimental = true;
    }
    return g;
}

}  // namespace sqc
