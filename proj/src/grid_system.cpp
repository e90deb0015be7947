#include <cmath>
#include <stdexcept>

#include "sqc/ballsys.hpp"

namespace sqc {

namespace {
std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

GridSystem::GridSystem(std::vector<double> mu, int n_max, int base, std::size_t max_points)
    : BallSystem(0, n_max, AdmissibleFn::constant(0)), mu_(std::move(mu)), base_(base) {
    if (mu_.empty()) throw std::invalid_argument("grid needs at least one axis");
    if (base_ < 2) throw std::invalid_argument("grid base must be >= 2");
    if (n_max < 0) throw std::invalid_argument("grid depth must be >= 0");
    for (double m : mu_)
        if (!(m >= 1.0)) throw std::invalid_argument("grid eigenvalues must be >= 1");
    double log_cells = 0.0;
    for (int i = 0; i < dim(); ++i) log_cells += exponent(i, n_max) * std::log2(static_cast<double>(base_));
    if (log_cells > std::log2(static_cast<double>(max_points)))
        throw std::length_error("grid needs " + std::to_string(std::exp2(log_cells)) +
                                " ground points, budget is " + std::to_string(max_points));
    points_ = 1;
    for (int i = 0; i < dim(); ++i) {
        fine_.push_back(cells(i, n_max));
        points_ *= fine_.back();
    }
}

double GridSystem::trace() const {
    double t = 0.0;
    for (double m : mu_) t += m;
    return t;
}

int GridSystem::exponent(int axis, int depth) const {
    return static_cast<int>(std::ceil(mu_[static_cast<std::size_t>(axis)] * depth - 1e-9));
}

std::size_t GridSystem::cells(int axis, int depth) const {
    return ipow(static_cast<std::size_t>(base_), exponent(axis, depth));
}

std::size_t GridSystem::num_balls(int depth) const {
    if (depth < n0_ || depth > n_max_) return 0;
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= cells(i, depth);
    return n;
}

std::vector<std::size_t> GridSystem::coords(const Ball& b) const {
    std::vector<std::size_t> c(static_cast<std::size_t>(dim()));
    std::size_t idx = b.index;
    for (int i = 0; i < dim(); ++i) {
        std::size_t m = cells(i, b.depth);
        c[static_cast<std::size_t>(i)] = idx % m;
        idx /= m;
    }
    return c;
}

Ball GridSystem::ball_at(int depth, const std::vector<std::size_t>& c) const {
    std::size_t idx = 0;
    for (int i = dim() - 1; i >= 0; --i) idx = idx * cells(i, depth) + c[static_cast<std::size_t>(i)];
    return Ball{depth, idx};
}

PointSet GridSystem::realize(const Ball& b) const {
    auto c = coords(b);
    std::vector<std::size_t> lo(c.size()), len(c.size());
    std::size_t total = 1;
    for (int i = 0; i < dim(); ++i) {
        std::size_t f = ipow(static_cast<std::size_t>(base_), exponent(i, n_max_) - exponent(i, b.depth));
        lo[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] * f;
        len[static_cast<std::size_t>(i)] = f;
        total *= f;
    }
    PointSet out;
    out.reserve(total);
    std::vector<std::size_t> off(c.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t idx = 0;
        for (int i = dim() - 1; i >= 0; --i)
            idx = idx * fine_[static_cast<std::size_t>(i)] + lo[static_cast<std::size_t>(i)] +
                  off[static_cast<std::size_t>(i)];
        out.push_back(static_cast<PointId>(idx));
        for (std::size_t i = 0; i < off.size(); ++i) {
            if (++off[i] < len[i]) break;
            off[i] = 0;
        }
    }
    // axis 0 is fastest in both enumeration and indexing, so the output is already sorted
    return out;
}

Ball GridSystem::shift(const Ball& b, long k, bool* truncated) const {
    long d = static_cast<long>(b.depth) - k;
    if (d < n0_) {
        if (truncated) *truncated = true;
        d = n0_;
    }
    int nd = static_cast<int>(d);
    auto c = coords(b);
    for (int i = 0; i < dim(); ++i)
        c[static_cast<std::size_t>(i)] /= ipow(static_cast<std::size_t>(base_), exponent(i, b.depth) - exponent(i, nd));
    return ball_at(nd, c);
}

Ball GridSystem::ball_of(PointId x, int depth) const {
    std::vector<std::size_t> c(static_cast<std::size_t>(dim()));
    std::size_t idx = x;
    for (int i = 0; i < dim(); ++i) {
        std::size_t fc = idx % fine_[static_cast<std::size_t>(i)];
        idx /= fine_[static_cast<std::size_t>(i)];
        c[static_cast<std::size_t>(i)] =
            fc / ipow(static_cast<std::size_t>(base_), exponent(i, n_max_) - exponent(i, depth));
    }
    return ball_at(depth, c);
}

std::vector<Ball> GridSystem::balls_containing(PointId x, int depth) const {
    if (depth < n0_ || depth > n_max_) return {};
    return {ball_of(x, depth)};
}

PointId GridSystem::center(const Ball& b) const {
    auto c = coords(b);
    std::size_t idx = 0;
    for (int i = dim() - 1; i >= 0; --i) {
        std::size_t f = ipow(static_cast<std::size_t>(base_), exponent(i, n_max_) - exponent(i, b.depth));
        idx = idx * fine_[static_cast<std::size_t>(i)] + c[static_cast<std::size_t>(i)] * f + f / 2;
    }
    return static_cast<PointId>(idx);
}

std::vector<double> GridSystem::position(PointId x) const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    std::size_t idx = x;
    for (int i = 0; i < dim(); ++i) {
        std::size_t m = fine_[static_cast<std::size_t>(i)];
        p[static_cast<std::size_t>(i)] = static_cast<double>(idx % m) / static_cast<double>(m);
        idx /= m;
    }
    return p;
}

PointId GridSystem::point_at(const std::vector<double>& x) const {
    if (x.size() != static_cast<std::size_t>(dim())) throw std::invalid_argument("point dimension mismatch");
    std::size_t idx = 0;
    for (int i = dim() - 1; i >= 0; --i) {
        std::size_t m = fine_[static_cast<std::size_t>(i)];
        double v = x[static_cast<std::size_t>(i)];
        if (!(v >= 0.0 && v < 1.0)) throw std::out_of_range("point outside the unit cube");
        auto c = static_cast<std::size_t>(std::floor(v * static_cast<double>(m)));
        idx = idx * m + std::min(c, m - 1);
    }
    return static_cast<PointId>(idx);
}

std::pair<std::vector<double>, std::vector<double>> GridSystem::box(const Ball& b) const {
    auto c = coords(b);
    std::vector<double> lo(c.size()), hi(c.size());
    for (int i = 0; i < dim(); ++i) {
        double m = static_cast<double>(cells(i, b.depth));
        lo[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)]) / m;
        hi[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)] + 1) / m;
    }
    return {lo, hi};
}

}  // namespace sqc
