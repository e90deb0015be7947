#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "sqc/modulus.hpp"

namespace sqc {

namespace {

std::uint64_t key(const Ball& b) { return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b.depth)) << 40) | b.index; }

/// Max over depth-d balls of sum_gamma d gamma * m_gamma(gamma in r.b)^(1-p) * 1{gamma meets b}.
double depth_sup(const BallSystem& sys, const CurveFamily& fam, double p, const AdmissibleFn& r, int d, bool* infinite) {
    const long rd = r(d);
    const int de = sys.shift(Ball{d, 0}, rd).depth;
    std::unordered_map<std::size_t, double> acc;
    std::unordered_map<std::uint64_t, double> massE;
    std::set<std::size_t> met;
    for (std::size_t c = 0; c < fam.size(); ++c) {
        if (fam.weight[c] <= 0.0) continue;
        massE.clear();
        met.clear();
        const auto& curve = fam.curves[c];
        for (std::size_t t = 0; t < curve.size(); ++t) {
            for (const Ball& E : sys.balls_containing(curve[t], de)) massE[key(E)] += fam.mass[c][t];
            for (const Ball& b : sys.balls_containing(curve[t], d)) met.insert(b.index);
        }
        for (std::size_t b : met) {
            auto it = massE.find(key(sys.shift(Ball{d, b}, rd)));
            double m = it == massE.end() ? 0.0 : it->second;
            if (m <= 0.0) {
                *infinite = true;
                continue;
            }
            acc[b] += fam.weight[c] * std::pow(m, 1.0 - p);
        }
    }
    double best = 0.0;
    for (auto& [b, v] : acc) best = std::max(best, v);
    return best;
}

}  // namespace

DiffusivityReport check_diffusivity(const BallSystem& sys, const CurveFamily& family, double p,
                                    const AdmissibleFn& r, int n_lo, int n_hi, const AdmissibleFn& k) {
    family.validate();
    if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
    n_lo = std::max(n_lo, sys.min_depth());
    n_hi = std::min(n_hi, sys.max_depth());
    if (n_lo > n_hi) throw std::invalid_argument("empty depth range");
    DiffusivityReport rep;
    const int top = sys.max_depth();
    std::vector<double> per(static_cast<std::size_t>(top - n_lo + 1), 0.0);
    std::vector<char> inf(per.size(), 0);
    for (int d = n_lo; d <= top; ++d) {
        bool flag = false;
        per[static_cast<std::size_t>(d - n_lo)] = depth_sup(sys, family, p, r, d, &flag);
        inf[static_cast<std::size_t>(d - n_lo)] = flag;
    }
    // suffix sup over deeper balls
    for (int d = top - 1; d >= n_lo; --d) {
        auto i = static_cast<std::size_t>(d - n_lo);
        per[i] = std::max(per[i], per[i + 1]);
        inf[i] = inf[i] || inf[i + 1];
    }
    for (int n = n_lo; n <= n_hi; ++n) {
        auto i = static_cast<std::size_t>(n - n_lo);
        rep.rows.push_back(DiffusivityRow{n, inf[i] ? kInfinity : per[i], inf[i] != 0});
    }
    const int mid = n_lo + (n_hi - n_lo + 1) / 2;
    bool any_inf = false;
    for (const auto& row : rep.rows)
        if (row.n >= mid) {
            rep.tau_proxy = std::max(rep.tau_proxy, row.tau);
            any_inf |= row.infinite;
        }
    rep.diffuse = !any_inf && std::isfinite(rep.tau_proxy);
    if (any_inf) rep.diagnostic = "a ball meets a curve whose enlargement carries no mass (r too small)";
    try {
        AdmissibleFn rk = compose_dotplus(r, k, n_lo, sys.max_depth()).fn;
        rep.l_implied = compose_dotplus(sys.q(), rk, n_lo, sys.max_depth()).fn;
    } catch (const std::exception& e) {
        // pointwise sum dominates the composition
        rep.l_implied = add(sys.q(), add(r, k, n_lo, sys.max_depth()), n_lo, sys.max_depth());
        if (!rep.diagnostic.empty()) rep.diagnostic += "; ";
        rep.diagnostic += std::string("composition fallback: ") + e.what();
    }
    if (rep.diffuse && rep.tau_proxy > 0.0) rep.lower_bound = family.total_weight() / rep.tau_proxy;
    return rep;
}

BourdonReport check_diffusivity_bourdon(const BallSystem& sys, const CurveFamily& family, double p_prime, int n_lo,
                                        int n_hi, const std::vector<double>& ps,
                                        const std::vector<AdmissibleFn>& rs) {
    family.validate();
    double Lmax = 0.0;
    for (std::size_t c = 0; c < family.size(); ++c) {
        double len = c < family.length.size() ? family.length[c] : -1.0;
        if (!(len >= 0.0) || !std::isfinite(len)) throw std::invalid_argument("curve lengths missing or unbounded");
        Lmax = std::max(Lmax, len);
    }
    n_lo = std::max(n_lo, sys.min_depth());
    n_hi = std::min(n_hi, sys.max_depth());
    if (n_lo > n_hi) throw std::invalid_argument("empty depth range");
    // delta(b) in natural log-scale units: a depth-d grid box has side base^-d
    const auto* grid = dynamic_cast<const GridSystem*>(&sys);
    const double unit = grid ? std::log(static_cast<double>(grid->base())) : 1.0;
    BourdonReport rep;
    rep.eta = -kInfinity;
    std::unordered_map<std::size_t, double> shadow;
    std::set<std::size_t> met;
    for (int d = n_lo; d <= n_hi; ++d) {
        shadow.clear();
        for (std::size_t c = 0; c < family.size(); ++c) {
            met.clear();
            for (PointId x : family.curves[c])
                for (const Ball& b : sys.balls_containing(x, d)) met.insert(b.index);
            for (std::size_t b : met) shadow[b] += family.weight[c];
        }
        for (auto& [b, v] : shadow)
            if (v > 0.0) rep.eta = std::max(rep.eta, std::log(v) - (1.0 - p_prime) * unit * d);
    }
    auto cfor = [&](double p) { return std::pow(Lmax, p - 1.0) * std::pow(1.0 - std::exp(-1.0), 1.0 - p); };
    if (!ps.empty()) rep.c = cfor(ps.front());
    for (double p : ps) {
        if (!(p > p_prime)) continue;
        for (const auto& r : rs) {
            BourdonBound bb;
            bb.p = p;
            bb.r_name = r.name();
            bb.constant = 0.0;
            for (int d = n_lo; d <= n_hi; ++d)
                bb.constant = std::max(bb.constant, cfor(p) * std::exp(rep.eta + (p_prime - p) * unit * d + double(r(d))));
            rep.bounds.push_back(bb);
        }
    }
    return rep;
}

}  // namespace sqc
