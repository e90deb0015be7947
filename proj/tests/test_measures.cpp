#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "sqc/measures.hpp"

using namespace sqc;

namespace {

// Cells of the depth-n triadic approximation of the middle-thirds Cantor set.
PointSet cantor_cells(const GridSystem& g) {
    PointSet out;
    for (PointId x = 0; x < g.num_points(); ++x) {
        std::size_t v = x;
        bool keep = true;
        for (int d = 0; d < g.max_depth(); ++d, v /= 3)
            if (v % 3 == 1) keep = false;
        if (keep) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST_CASE("shifted gauges") {
    GridSystem line({1.0}, 8);
    auto diam = Gauge::diameter_power(line);
    Ball b{5, 3};
    CHECK(shifted_gauge(line, diam, AdmissibleFn::zero(), b) == diam.of_ball(line, b));
    CHECK(shifted_gauge(line, diam, AdmissibleFn::constant(2), b) == doctest::Approx(0.125));
    auto x = std::make_shared<const SampledFunction>(SampledFunction::coordinate(line, 0));
    auto osc = Gauge::oscillation(x);
    CHECK(shifted_gauge(line, osc, AdmissibleFn::logarithmic(), Ball{8, 17}) == doctest::Approx(1.0 / 32.0));
    for (std::size_t i = 0; i < line.num_balls(6); ++i) {
        double prev = 0.0;
        for (long l = 0; l <= 6; ++l) {
            double v = shifted_gauge(line, osc, AdmissibleFn::constant(l), Ball{6, i});
            CHECK(v >= prev);
            prev = v;
        }
    }
    auto rough = Gauge::table([](const Ball& c) { return 1.0 / (1.0 + static_cast<double>(c.index)); }, false);
    CHECK_THROWS_AS(shifted_gauge(line, rough, AdmissibleFn::constant(1), b), NonMonotoneGauge);
}

TEST_CASE("Caratheodory content of the square") {
    GridSystem g({1.0, 1.0}, 4);
    auto diam = Gauge::diameter_power(g);
    CHECK(caratheodory_content(g, diam, 2.0, AdmissibleFn::zero(), 3, {}).value == 0.0);
    auto c2 = caratheodory_content(g, diam, 2.0, AdmissibleFn::zero(), 3, g.all_points());
    CHECK(c2.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c2.exact);
    auto c3 = caratheodory_content(g, diam, 3.0, AdmissibleFn::zero(), 3, g.all_points());
    CHECK(c3.value == doctest::Approx(0.125).epsilon(1e-12));
    // every cover by cells of depth >= 3 costs at least the tiling: mixing in depth-4 cells
    // replaces one 1/64 term by four 1/256 terms for p = 2 and increases it for p = 3
    CHECK(c3.value <= 64.0 * std::pow(0.125, 3.0) + 1e-15);
}

TEST_CASE("curve covers") {
    const int n = 4;
    GridSystem g({1.0, 1.0}, n);
    auto diam = Gauge::diameter_power(g);
    std::vector<PointId> line;
    for (std::size_t x = 0; x < g.cells(0, n); ++x) line.push_back(static_cast<PointId>(g.ball_at(n, {x, 5}).index));
    CHECK(min_curve_cover(g, diam, AdmissibleFn::zero(), line, n) == doctest::Approx(1.0));
    CHECK(min_curve_cover(g, diam, AdmissibleFn::constant(1), line, n) == doctest::Approx(1.0));
    CHECK(min_curve_cover(g, diam, AdmissibleFn::zero(), {line[3]}, n) == doctest::Approx(1.0 / 16.0));
    CHECK_THROWS_AS(min_curve_cover(g, diam, AdmissibleFn::zero(), {100000}, n), std::invalid_argument);
}

TEST_CASE("interval covers") {
    std::vector<CurveInterval> ivs{{0, 2, 1.0, 0}, {2, 4, 1.0, 0}, {0, 4, 2.5, 0}, {3, 3, 0.1, 0}, {1, 1, 0.1, 0}};
    // brute force over subsets
    double best = kInfinity;
    for (unsigned mask = 1; mask < 32; ++mask) {
        std::vector<char> hit(5, 0);
        double c = 0.0;
        for (unsigned i = 0; i < 5; ++i)
            if (mask >> i & 1u) {
                c += ivs[i].cost;
                for (std::size_t t = ivs[i].first; t <= ivs[i].last; ++t) hit[t] = 1;
            }
        if (std::all_of(hit.begin(), hit.end(), [](char h) { return h; })) best = std::min(best, c);
    }
    CHECK(min_interval_cover(5, ivs).cost == doctest::Approx(best));
    CHECK(min_interval_cover(3, {{0, 0, 1.0, 0}}).cost == kInfinity);
}

TEST_CASE("packing pre-content") {
    GridSystem g({1.0, 1.0}, 5);
    auto diam = Gauge::diameter_power(g);
    CHECK(packing_precontent(g, diam, 2.0, AdmissibleFn::zero(), AdmissibleFn::zero(), 3, {}).value == 0.0);
    auto pc = packing_precontent(g, diam, 2.0, AdmissibleFn::zero(), AdmissibleFn::zero(), 3, g.all_points());
    CHECK(pc.value == doctest::Approx(1.0));
    CHECK(pc.exact);
}

TEST_CASE("Minkowski split of packing pre-contents") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GridSystem g({1.0, 1.0}, 5);
    for (int trial = 0; trial < 20; ++trial) {
        double a = U(rng), b = U(rng), c = U(rng);
        auto f = std::make_shared<const SampledFunction>(SampledFunction::on_grid(
            g, [&](const std::vector<double>& x) { return a * x[0] + b * x[1] * x[1] + c * std::sin(5.0 * x[0] * x[1]); }));
        auto phi0 = Gauge::diameter_power(g);
        auto phi1 = Gauge::oscillation(f);
        double lambda = 0.5 + U(rng) * 0.5 + 0.5;
        auto phi = Gauge::combination(lambda, phi0, phi1);
        double p = 1.5 + (U(rng) + 1.0);
        auto k = AdmissibleFn::constant(trial % 2);
        auto l = AdmissibleFn::constant(trial % 3);
        const auto A = g.all_points();
        double v = packing_precontent(g, phi, p, k, l, 3, A, 6, 100 + trial).value;
        double v0 = packing_precontent(g, phi0, p, k, l, 3, A, 6, 100 + trial).value;
        double v1 = packing_precontent(g, phi1, p, k, l, 3, A, 6, 100 + trial).value;
        CHECK(std::pow(v, 1.0 / p) <= lambda * std::pow(v0, 1.0 / p) + std::pow(v1, 1.0 / p) + 1e-12);
    }
}

TEST_CASE("Hausdorff contents") {
    for (int n = 1; n <= 6; ++n) {
        GridSystem line({1.0}, n);
        CHECK(hausdorff_content(line, line.all_points(), 1.0, n) == doctest::Approx(1.0));
    }
    for (int n = 1; n <= 4; ++n) {
        GridSystem sq({1.0, 1.0}, n);
        CHECK(hausdorff_content(sq, sq.all_points(), 2.0, n) == doctest::Approx(1.0));
    }
    const double s = std::log(2.0) / std::log(3.0);
    for (int n = 1; n <= 10; ++n) {
        GridSystem tri({1.0}, n, 3);
        auto C = cantor_cells(tri);
        CHECK(C.size() == (std::size_t{1} << n));
        double h = hausdorff_content(tri, C, s, 0);
        CHECK(h >= 0.5);
        CHECK(h <= 1.5);
    }
}

TEST_CASE("seed splitting is deterministic and spreads") {
    CHECK(split_seed(1, 2) == split_seed(1, 2));
    CHECK(split_seed(1, 2) != split_seed(1, 3));
    CHECK(split_seed(1, 2) != split_seed(2, 2));
}
