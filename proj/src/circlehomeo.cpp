#include "sqc/circlehomeo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sqc/measures.hpp"

namespace sqc {

double EpsilonSpec::operator()(int j) const {
    if (j < 0) return 0.0;
    switch (kind) {
        case EpsilonKind::zero:
            return 0.0;
        case EpsilonKind::list:
            return static_cast<std::size_t>(j) < values.size() ? values[static_cast<std::size_t>(j)] : 0.0;
        case EpsilonKind::power:
            break;
    }
    return std::min(std::pow(3.0 + j, -a), cap);
}

void EpsilonSpec::validate() const {
    if (kind == EpsilonKind::power) {
        if (!(a > 0.0)) throw std::invalid_argument("eps exponent a must be positive");
        if (!(cap > 0.0 && cap < 0.5)) throw std::invalid_argument("eps cap must lie in (0, 1/2)");
    }
    if (kind == EpsilonKind::list) {
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (!(values[j] >= 0.0 && values[j] < 0.5)) throw std::invalid_argument("eps values must lie in [0, 1/2)");
            if (j > 0 && values[j] > values[j - 1]) throw std::invalid_argument("eps values must be nonincreasing");
        }
    }
}

void CascadeSpec::validate() const {
    eps.validate();
    if (t < 0) throw std::invalid_argument("negative cascade depth");
    if (source == SignSource::explicit_list)
        for (int s : signs)
            if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
}

int CascadeSpec::sign(int depth, std::uint64_t index) const {
    switch (source) {
        case SignSource::all_plus:
            return 1;
        case SignSource::explicit_list: {
            std::uint64_t h = ((std::uint64_t{1} << depth) - 1) + index;
            if (h >= signs.size())
                throw std::out_of_range("no explicit sign for vertex " + std::to_string(h));
            return signs[h];
        }
        case SignSource::seeded:
            break;
    }
    return (split_seed(seed, (std::uint64_t{1} << depth) + index) >> 63) ? 1 : -1;
}

void CascadeSpec::child_factors(int depth, std::uint64_t index, double& f0, double& f1) const {
    const double e = eps(depth);
    if (convention == SignConvention::sibling) {
        const double s = sign(depth, index) * e;
        f0 = 0.5 + s;
        f1 = 0.5 - s;
    } else {
        f0 = 0.5 + sign(depth + 1, 2 * index) * e;
        f1 = 0.5 + sign(depth + 1, 2 * index + 1) * e;
    }
}

namespace {

std::size_t checked_size(int t) {
    if (t < 0) throw std::invalid_argument("negative cascade depth");
    if (t > kMaxCascadeDepth)
        throw std::length_error("cascade depth " + std::to_string(t) + " exceeds " + std::to_string(kMaxCascadeDepth));
    if (t > 30) throw std::length_error("cascade arrays need 2^" + std::to_string(t) + " entries");
    return std::size_t{1} << t;
}

struct Neumaier {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

double subtree_mass(const CascadeSpec& spec, int depth, std::uint64_t index, int t) {
    if (depth == t) return 1.0;
    double f0, f1;
    spec.child_factors(depth, index, f0, f1);
    return f0 * subtree_mass(spec, depth + 1, 2 * index, t) + f1 * subtree_mass(spec, depth + 1, 2 * index + 1, t);
}

}  // namespace

std::vector<double> cascade_masses(const CascadeSpec& spec, int t) {
    spec.validate();
    const std::size_t size = checked_size(t);
    std::vector<double> m(size, 0.0);
    m[0] = 1.0;
    // level d -> d+1 in place, right to left
    for (int d = 0; d < t; ++d) {
        const std::size_t width = std::size_t{1} << d;
        for (std::size_t i = width; i-- > 0;) {
            double f0, f1;
            spec.child_factors(d, i, f0, f1);
            const double parent = m[i];
            m[2 * i + 1] = parent * f1;
            m[2 * i] = parent * f0;
        }
    }
    return m;
}

double mass_defect(const CascadeSpec& spec, int t) {
    Neumaier acc;
    for (double v : cascade_masses(spec, t)) acc.add(v);
    return std::abs(acc.value() - 1.0);
}

std::vector<double> repartition(const CascadeSpec& spec, int t) {
    spec.validate();
    const std::size_t size = checked_size(t);
    std::vector<double> phi(size + 1, 0.0);
    if (spec.convention == SignConvention::independent) {
        auto m = cascade_masses(spec, t);
        Neumaier acc;
        for (std::size_t k = 0; k < size; ++k) {
            acc.add(m[k]);
            phi[k + 1] = acc.value();
        }
        const double total = phi[size];
        for (double& v : phi) v /= total;
        phi[size] = 1.0;
        return phi;
    }
    std::vector<double> m(size, 0.0);
    m[0] = 1.0;
    phi[1] = 1.0;
    for (int d = 0; d < t; ++d) {
        const std::size_t width = std::size_t{1} << d;
        for (std::size_t i = width; i-- > 0;) {
            double f0, f1;
            spec.child_factors(d, i, f0, f1);
            const double parent = m[i];
            m[2 * i + 1] = parent * f1;
            m[2 * i] = parent * f0;
        }
        phi[2 * width] = 1.0;
        for (std::size_t k = width; k-- > 0;) {
            const double left = phi[k];
            phi[2 * k + 1] = left + m[2 * k];
            phi[2 * k] = left;
        }
    }
    return phi;
}

CascadeMap::CascadeMap(CascadeSpec spec, int t) : spec_(std::move(spec)), t_(t) {
    spec_.validate();
    if (t_ < 0 || t_ > kMaxCascadeDepth) throw std::length_error("cascade depth out of range");
    if (spec_.convention == SignConvention::independent) total_ = subtree_mass(spec_, 0, 0, t_);
}

double CascadeMap::operator()(double x) const {
    if (!(x > 0.0)) return 0.0;
    if (x >= 1.0) return 1.0;
    const double scaled = std::ldexp(x, t_);
    const auto cell = static_cast<std::uint64_t>(std::floor(scaled));
    const double frac = scaled - static_cast<double>(cell);
    double phi = 0.0, m = 1.0;
    std::uint64_t idx = 0;
    for (int d = 0; d < t_; ++d) {
        double f0, f1;
        spec_.child_factors(d, idx, f0, f1);
        const bool right = (cell >> (t_ - 1 - d)) & 1U;
        if (right) {
            phi += m * f0;
            m *= f1;
        } else {
            m *= f0;
        }
        idx = 2 * idx + (right ? 1 : 0);
    }
    return (phi + m * frac) / total_;
}

double envelope_v(const EpsilonSpec& eps, double m) {
    const long t = static_cast<long>(std::floor(m / std::numbers::ln2 + 1e-9));
    double up = std::numbers::ln2, low = std::numbers::ln2;
    for (long j = 0; j <= t; ++j) {
        const double e = eps(static_cast<int>(j));
        if (j < t) up += std::log1p(2.0 * e);
        low -= std::log1p(-2.0 * e);
    }
    return std::max(up, low);
}

double envelope_v_real(const EpsilonSpec& eps, double m) {
    const long terms = static_cast<long>(std::floor(m / std::numbers::ln2)) + 2;
    double v = 2.0 * std::numbers::ln2;
    for (long j = 0; j < terms; ++j) v -= std::log1p(-2.0 * eps(static_cast<int>(j)));
    return v;
}

ContinuityReport continuity_moduli(const CascadeSpec& spec, int t, const std::vector<int>& exponents) {
    const auto phi = repartition(spec, t);
    const std::size_t size = phi.size() - 1;
    ContinuityReport rep;
    rep.max_violation = -kInfinity;
    for (int e : exponents) {
        ContinuityRow row;
        row.e = e;
        row.s = std::ldexp(1.0, -e);
        row.v = envelope_v(spec.eps, e * std::numbers::ln2);
        if (e < 1 || e > t) {
            row.skipped = true;
            rep.rows.push_back(row);
            continue;
        }
        const std::size_t gap = std::size_t{1} << (t - e);
        double hi = 0.0, lo = kInfinity;
        for (std::size_t k = 0; k + gap <= size; ++k) {
            const double d = phi[k + gap] - phi[k];
            hi = std::max(hi, d);
            lo = std::min(lo, d);
        }
        row.l = hi;
        row.L = lo;
        const double ls = std::log(row.s);
        row.upper_excess = std::log(hi) - ls - row.v;
        row.lower_excess = ls - row.v - std::log(lo);
        rep.max_violation = std::max({rep.max_violation, row.upper_excess, row.lower_excess});
        rep.rows.push_back(row);
    }
    rep.holds = !(rep.max_violation > 0.0);
    return rep;
}

NonacReport nonac_statistic(const CascadeSpec& spec, int t, const std::vector<double>& rhos) {
    if (t < 0) throw std::invalid_argument("negative cascade depth");
    if (t > kMaxCascadeDepth) throw std::length_error("cascade depth exceeds " + std::to_string(kMaxCascadeDepth));
    for (double r : rhos)
        if (!(r > 0.0)) throw std::invalid_argument("rho must be positive");
    const CascadeMap map(spec, t);
    const double total = map.total_mass();
    NonacReport rep;
    if (rhos.empty()) return rep;
    const double rho_min = *std::min_element(rhos.begin(), rhos.end());
    const std::size_t R = rhos.size();
    std::vector<std::vector<double>> by_depth(R, std::vector<double>(static_cast<std::size_t>(t) + 1, 0.0));
    std::vector<Neumaier> image(R);

    // prefix_min is the minimum of 2^|w| M(w) over proper prefixes w of v
    std::function<void(int, std::uint64_t, double, double)> visit = [&](int d, std::uint64_t idx, double mass,
                                                                          double prefix_min) {
        const double ratio = std::ldexp(mass, d);
        for (std::size_t r = 0; r < R; ++r)
            if (ratio <= rhos[r] && rhos[r] < prefix_min) {
                by_depth[r][static_cast<std::size_t>(d)] += std::ldexp(1.0, -d);
                image[r].add(mass);
            }
        const double next_min = std::min(prefix_min, ratio);
        if (d == t || next_min <= rho_min) return;
        double f0, f1;
        spec.child_factors(d, idx, f0, f1);
        visit(d + 1, 2 * idx, mass * f0, next_min);
        visit(d + 1, 2 * idx + 1, mass * f1, next_min);
    };
    visit(0, 0, 1.0 / total, kInfinity);

    for (std::size_t r = 0; r < R; ++r) {
        NonacRow row;
        row.rho = rhos[r];
        double acc = 0.0;
        for (double v : by_depth[r]) {
            acc += v;
            row.lambda_b_by_depth.push_back(acc);
        }
        row.lambda_b = acc;
        row.lambda_phi_b = image[r].value();
        row.holds = row.lambda_phi_b <= row.rho * (1.0 + 1e-12);
        rep.holds = rep.holds && row.holds;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

double PeriodicCascade::operator()(double x) {
    const double fl = std::floor(x);
    const auto unit = static_cast<long long>(fl);
    auto it = units_.find(unit);
    if (it == units_.end()) {
        CascadeSpec s = base_;
        s.seed = split_seed(base_.seed, static_cast<std::uint64_t>(unit));
        it = units_.emplace(unit, CascadeMap(std::move(s), t_)).first;
    }
    return fl + it->second(x - fl);
}

QsReport product_map_qs_test(const CascadeSpec& spec1, const CascadeSpec& spec2, const QsOptions& opt) {
    if (!(opt.K >= 1.0)) throw std::invalid_argument("K must be >= 1");
    if (opt.n_lo < 1 || opt.n_hi < opt.n_lo) throw std::invalid_argument("bad n range");
    if (opt.trials < 0) throw std::invalid_argument("negative trial count");
    PeriodicCascade psi1(spec1, opt.t), psi2(spec2, opt.t);
    auto v = [&](double m) { return std::max(envelope_v_real(spec1.eps, m), envelope_v_real(spec2.eps, m)); };

    QsReport rep;
    for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
        QsRow row;
        row.n = n;
        const double kn = static_cast<double>(opt.k(n));
        row.budget = kn + v(opt.K * n + kn) + 4.0 * v(opt.K * n + 2.0 * v(n));
        rep.rows.push_back(row);
    }

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto direction = [&](double& u1, double& u2) {
        const double other = unif(rng) < 0.25 ? 1.0 - std::pow(10.0, -6.0 * unif(rng)) : unif(rng);
        const double a = unif(rng) < 0.5 ? -1.0 : 1.0, b = unif(rng) < 0.5 ? -1.0 : 1.0;
        if (unif(rng) < 0.5) {
            u1 = a;
            u2 = b * other;
        } else {
            u1 = a * other;
            u2 = b;
        }
    };
    const int span = opt.n_hi - opt.n_lo + 1;
    for (long trial = 0; trial < opt.trials; ++trial) {
        const int n = opt.n_lo + static_cast<int>(std::min<double>(span - 1, std::floor(unif(rng) * span)));
        QsRow& row = rep.rows[static_cast<std::size_t>(n - opt.n_lo)];
        const double kn = static_cast<double>(opt.k(n));
        for (;;) {
            const double x1 = unif(rng) * opt.box, x2 = unif(rng) * opt.box;
            const double my = n / opt.K + unif(rng) * (opt.K * n - n / opt.K);
            const double dy = std::exp(-my);
            const double dz = dy * std::exp((2.0 * unif(rng) - 1.0) * kn);
            double u1, u2, w1, w2;
            direction(u1, u2);
            direction(w1, w2);
            const double y1 = x1 + dy * u1, y2 = x2 + dy * u2;
            const double z1 = x1 + dz * w1, z2 = x2 + dz * w2;
            const double p1 = psi1(x1), p2 = psi2(x2);
            const double ny = std::max(std::abs(psi1(y1) - p1), std::abs(psi2(y2) - p2));
            const double nz = std::max(std::abs(psi1(z1) - p1), std::abs(psi2(z2) - p2));
            const double dyn = std::max(std::abs(y1 - x1), std::abs(y2 - x2));
            const double dzn = std::max(std::abs(z1 - x1), std::abs(z2 - x2));
            if (!(ny > 0.0 && nz > 0.0 && dzn > 0.0 && dyn > 0.0)) {
                ++rep.resampled;
                continue;
            }
            // rounding may move the realized ratios slightly off the sampled ones
            if (-std::log(dyn) < n / opt.K || -std::log(dyn) > opt.K * n ||
                std::abs(std::log(dyn / dzn)) > kn) {
                ++rep.resampled;
                continue;
            }
            const double observed = std::abs(std::log(ny / nz));
            row.max_observed = std::max(row.max_observed, observed);
            row.max_excess = std::max(row.max_excess, observed - row.budget);
            ++row.trials;
            break;
        }
    }
    for (const auto& row : rep.rows) {
        rep.trials += row.trials;
        if (row.trials > 0) rep.max_excess = std::max(rep.max_excess, row.max_excess);
    }
    rep.holds = !(rep.max_excess > 0.0);
    return rep;
}

std::string to_string(SignConvention c) { return c == SignConvention::sibling ? "sibling" : "independent"; }

std::string to_string(SignSource s) {
    switch (s) {
        case SignSource::seeded:
            return "seeded";
        case SignSource::all_plus:
            return "all_plus";
        case SignSource::explicit_list:
            return "explicit";
    }
    return "seeded";
}

}  // namespace sqc
