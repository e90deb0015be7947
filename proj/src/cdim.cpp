#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "sqc/modulus.hpp"
#include "sqc/parallel.hpp"

namespace sqc {

SlopeFit fit_slope(const std::vector<double>& ns, const std::vector<double>& ys) {
    if (ns.size() != ys.size() || ns.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
    const double m = static_cast<double>(ns.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sx += ns[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sxx += (ns[i] - mx) * (ns[i] - mx);
        sxy += (ns[i] - mx) * (ys[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double e = ys[i] - (f.intercept + f.slope * ns[i]);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / m);
    f.log_values = ys;
    return f;
}

namespace {


struct Evaluator {
    const BallSystem& sys;
    const CurveFamily& fam;
    const CdimOptions& opt;
    std::vector<ModulusReport>& table;
    std::mutex mu;

    SlopeFit at(double p) {
        std::vector<double> ns;
        for (int n = opt.n_lo; n <= opt.n_hi; ++n) ns.push_back(n);
        std::vector<ModulusReport> reps(ns.size());
        parallel_for(ns.size(), opt.jobs, [&](std::size_t i) {
            ModulusOptions o = opt.base;
            o.p = p;
            o.n = static_cast<int>(ns[i]);
            reps[i] = opt.packing ? solve_packing_modulus(sys, fam, o, opt.restarts) : solve_modulus(sys, fam, o);
        });
        std::vector<double> ys;
        for (const auto& r : reps) {
            if (r.infeasible) throw std::runtime_error("modulus infeasible at n = " + std::to_string(r.n));
            ys.push_back(std::log(std::max(r.value, 1e-300)));
        }
        {
            std::lock_guard<std::mutex> lock(mu);
            table.insert(table.end(), reps.begin(), reps.end());
        }
        SlopeFit f = fit_slope(ns, ys);
        f.p = p;
        return f;
    }
};

}  // namespace

CdimEstimate estimate_cdim(const BallSystem& sys, const CurveFamily& family, const CdimOptions& opt) {
    if (opt.p_grid.empty()) throw std::invalid_argument("empty p grid");
    if (!std::is_sorted(opt.p_grid.begin(), opt.p_grid.end())) throw std::invalid_argument("p grid must be ascending");
    if (opt.n_hi <= opt.n_lo) throw std::invalid_argument("need at least two scales");
    CdimEstimate est;
    est.method = opt.packing ? "pmod" : "mod";
    Evaluator ev{sys, family, opt, est.table, {}};
    for (double p : opt.p_grid) est.fits.push_back(ev.at(p));

    std::size_t bracket = est.fits.size();
    for (std::size_t i = 0; i + 1 < est.fits.size(); ++i)
        if (est.fits[i].slope > 0.0 && est.fits[i + 1].slope <= 0.0) bracket = i;
    if (bracket == est.fits.size()) {
        bool positive = est.fits.front().slope > 0.0;
        const SlopeFit& edge = positive ? est.fits.back() : est.fits.front();
        est.p_star = edge.p;
        est.residual = edge.residual;
        est.crossover = false;
        return est;
    }
    SlopeFit lo = est.fits[bracket], hi = est.fits[bracket + 1];
    while (hi.p - lo.p > opt.bisect_tol) {
        SlopeFit mid = ev.at(0.5 * (lo.p + hi.p));
        est.fits.push_back(mid);
        (mid.slope > 0.0 ? lo : hi) = mid;
    }
    // secant step inside the final bracket
    double t = lo.slope / (lo.slope - hi.slope);
    est.p_star = lo.p + t * (hi.p - lo.p);
    est.residual = std::max(lo.residual, hi.residual);
    est.crossover = true;
    std::sort(est.fits.begin(), est.fits.end(), [](const SlopeFit& a, const SlopeFit& b) { return a.p < b.p; });
    return est;
}

}  // namespace sqc
