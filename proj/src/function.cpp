#include "sqc/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqc {

std::complex<double> SampledFunction::sample(PointId x, std::size_t j) const {
    std::size_t i = static_cast<std::size_t>(x) * per_point + j;
    return {re[i], im.empty() ? 0.0 : im[i]};
}

double SampledFunction::sup_norm(const PointSet& K) const {
    double m = 0.0;
    for (PointId x : K)
        for (std::size_t j = 0; j < per_point; ++j) m = std::max(m, std::abs(sample(x, j)));
    return m;
}

namespace {

double cross(const std::complex<double>& o, const std::complex<double>& a, const std::complex<double>& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Diameter of a planar point set via its convex hull.
double planar_diameter(std::vector<std::complex<double>> pts) {
    auto lt = [](const std::complex<double>& a, const std::complex<double>& b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(pts.begin(), pts.end(), lt);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;
    std::vector<std::complex<double>> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double d = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, std::abs(hull[i] - hull[j]));
    return d;
}

}  // namespace

double SampledFunction::osc(const PointSet& a) const {
    if (a.empty()) return 0.0;
    if (!is_complex()) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (PointId x : a) {
            const double* v = &re[static_cast<std::size_t>(x) * per_point];
            for (std::size_t j = 0; j < per_point; ++j) {
                lo = std::min(lo, v[j]);
                hi = std::max(hi, v[j]);
            }
        }
        return hi - lo;
    }
    std::vector<std::complex<double>> pts;
    pts.reserve(a.size() * per_point);
    for (PointId x : a)
        for (std::size_t j = 0; j < per_point; ++j) pts.push_back(sample(x, j));
    return planar_diameter(std::move(pts));
}

SampledFunction SampledFunction::constant(std::size_t points, double c) {
    SampledFunction f;
    f.name = "const";
    f.per_point = 1;
    f.re.assign(points, c);
    return f;
}

namespace {

template <class F, class Store>
void sample_corners(const GridSystem& g, F&& f, Store&& store) {
    const int d = g.dim();
    const std::size_t corners = std::size_t{1} << d;
    std::vector<double> width(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) width[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(g.cells(i, g.max_depth()));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        auto lo = g.position(static_cast<PointId>(p));
        for (std::size_t c = 0; c < corners; ++c) {
            for (int i = 0; i < d; ++i)
                x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] +
                                                 (((c >> i) & 1u) ? width[static_cast<std::size_t>(i)] : 0.0);
            store(p * corners + c, f(x));
        }
    }
}

}  // namespace

SampledFunction SampledFunction::on_grid(const GridSystem& g,
                                         const std::function<double(const std::vector<double>&)>& f,
                                         std::string name) {
    SampledFunction out;
    out.name = std::move(name);
    out.per_point = std::size_t{1} << g.dim();
    out.re.resize(g.num_points() * out.per_point);
    sample_corners(g, f, [&](std::size_t i, double v) { out.re[i] = v; });
    return out;
}

SampledFunction SampledFunction::on_grid_complex(
    const GridSystem& g, const std::function<std::complex<double>(const std::vector<double>&)>& f,
    std::string name) {
    SampledFunction out;
    out.name = std::move(name);
    out.per_point = std::size_t{1} << g.dim();
    out.re.resize(g.num_points() * out.per_point);
    out.im.resize(out.re.size());
    sample_corners(g, f, [&](std::size_t i, std::complex<double> v) {
        out.re[i] = v.real();
        out.im[i] = v.imag();
    });
    return out;
}

SampledFunction SampledFunction::coordinate(const GridSystem& g, int axis) {
    if (axis < 0 || axis >= g.dim()) throw std::out_of_range("coordinate axis out of range");
    return on_grid(
        g, [axis](const std::vector<double>& x) { return x[static_cast<std::size_t>(axis)]; },
        "x" + std::to_string(axis + 1));
}

namespace {
void check_same_shape(const SampledFunction& f, const SampledFunction& g) {
    if (f.per_point != g.per_point || f.re.size() != g.re.size())
        throw std::invalid_argument("sampled functions live on different sample sets");
}
}  // namespace

SampledFunction operator*(const SampledFunction& f, const SampledFunction& g) {
    check_same_shape(f, g);
    SampledFunction out;
    out.name = f.name + "*" + g.name;
    out.per_point = f.per_point;
    out.re.resize(f.re.size());
    bool cplx = f.is_complex() || g.is_complex();
    if (cplx) out.im.resize(f.re.size());
    for (std::size_t i = 0; i < f.re.size(); ++i) {
        std::complex<double> a{f.re[i], f.im.empty() ? 0.0 : f.im[i]};
        std::complex<double> b{g.re[i], g.im.empty() ? 0.0 : g.im[i]};
        auto c = a * b;
        out.re[i] = c.real();
        if (cplx) out.im[i] = c.imag();
    }
    return out;
}

SampledFunction operator+(const SampledFunction& f, const SampledFunction& g) {
    check_same_shape(f, g);
    SampledFunction out;
    out.name = f.name + "+" + g.name;
    out.per_point = f.per_point;
    out.re.resize(f.re.size());
    bool cplx = f.is_complex() || g.is_complex();
    if (cplx) out.im.resize(f.re.size());
    for (std::size_t i = 0; i < f.re.size(); ++i) {
        out.re[i] = f.re[i] + g.re[i];
        if (cplx) out.im[i] = (f.im.empty() ? 0.0 : f.im[i]) + (g.im.empty() ? 0.0 : g.im[i]);
    }
    return out;
}

SampledFunction scaled(const SampledFunction& f, double lambda) {
    SampledFunction out = f;
    for (double& v : out.re) v *= lambda;
    for (double& v : out.im) v *= lambda;
    return out;
}

}  // namespace sqc
