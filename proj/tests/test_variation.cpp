#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sqc/spaces.hpp"
#include "sqc/variation.hpp"

using namespace sqc;

namespace {

std::shared_ptr<const SampledFunction> share(SampledFunction f) {
    return std::make_shared<const SampledFunction>(std::move(f));
}

std::vector<double> linear_candidate(const GridSystem& g) {
    const std::size_t side = g.cells(0, g.max_depth()) + 1;
    std::vector<double> v(side * (g.cells(1, g.max_depth()) + 1));
    // vertices of the first and last ground columns are pinned to 0 and 1
    for (std::size_t i = 0; i < v.size(); ++i) {
        double t = (static_cast<double>(i % side) - 1.0) / static_cast<double>(side - 3);
        v[i] = std::clamp(t, 0.0, 1.0);
    }
    return v;
}

}  // namespace

TEST_CASE("variation of constants and coordinates") {
    GridSystem g({1.0, 1.0}, 6);
    const auto K = g.all_points();
    const auto zero = AdmissibleFn::zero();
    for (const auto& r : p_variation(g, share(SampledFunction::constant(g.num_points(), 3.0)), K, 2.0, zero, zero, 1, 6))
        CHECK(r.value == 0.0);
    auto x = share(SampledFunction::coordinate(g, 0));
    for (const auto& r : p_variation(g, x, K, 2.0, zero, zero, 1, 6)) {
        CHECK(r.value == doctest::Approx(1.0));
        CHECK(r.exact);
    }
    for (const auto& r : p_variation(g, x, K, 3.0, zero, zero, 1, 6))
        CHECK(r.value == doctest::Approx(std::ldexp(1.0, -r.n)));
}

TEST_CASE("seminorms") {
    GridSystem g({1.0, 1.0}, 6);
    const auto K = g.all_points();
    const auto zero = AdmissibleFn::zero();
    CHECK(seminorm(g, share(SampledFunction::constant(g.num_points(), 0.0)), K, 2.0, zero, zero, 5) == 0.0);
    CHECK(seminorm(g, share(SampledFunction::constant(g.num_points(), 1.0)), K, 2.0, zero, zero, 5) ==
          doctest::Approx(1.0));
    CHECK(seminorm(g, share(SampledFunction::coordinate(g, 0)), K, 2.0, zero, zero, 5) == doctest::Approx(2.0));
}

TEST_CASE("variation is homogeneous of degree p") {
    GridSystem g({1.0, 1.0}, 5);
    const auto K = g.all_points();
    auto f = SampledFunction::on_grid(g, [](const std::vector<double>& x) { return std::sin(3.0 * x[0]) + x[1] * x[1]; });
    for (double p : {1.5, 2.0, 3.0})
        for (double lambda : {-2.0, 0.5, 3.0}) {
            auto k = AdmissibleFn::constant(1);
            auto l = AdmissibleFn::constant(1);
            double a = p_variation(g, share(scaled(f, lambda)), K, p, k, l, 3, 3, 4, 9)[0].value;
            double b = p_variation(g, share(f), K, p, k, l, 3, 3, 4, 9)[0].value;
            CHECK(a == doctest::Approx(std::pow(std::abs(lambda), p) * b).epsilon(1e-12));
        }
}

TEST_CASE("multiplicative seminorm") {
    GridSystem g({1.0, 1.0}, 5);
    const auto K = g.all_points();
    const auto zero = AdmissibleFn::zero();
    auto one = SampledFunction::constant(g.num_points(), 1.0);
    auto m1 = multiplicative_check(g, one, one, K, 2.0, zero, zero, 4);
    CHECK(m1.holds);
    CHECK(m1.slack == doctest::Approx(0.0));
    auto x = SampledFunction::coordinate(g, 0);
    auto mx = multiplicative_check(g, x, x, K, 2.0, zero, zero, 4);
    CHECK(mx.holds);
    CHECK(mx.slack > 0.0);
}

TEST_CASE("square capacity") {
    for (double p : {2.0, 3.0}) {
        const int n = 4;
        GridSystem g({1.0, 1.0}, n + 1);
        auto cond = square_condenser(g);
        CapacityOptions o;
        o.p = p;
        o.n = n;
        auto c = capacity(g, cond, o);
        double linear = capacity_objective(g, cond, o, linear_candidate(g));
        CHECK(c.value <= linear * (1.0 + o.tol) + 1e-12);
        if (p == 2.0) CHECK(std::abs(c.value - 1.0) <= 0.05);
        if (p == 3.0) CHECK(c.value <= std::ldexp(1.0, -n) * (1.0 + o.tol));
        CHECK(c.vertex_values.size() == (g.cells(0, n + 1) + 1) * (g.cells(1, n + 1) + 1));
    }
}

TEST_CASE("condensers") {
    GridSystem g({1.0, 1.0}, 4);
    Condenser empty;
    empty.d0 = {0};
    empty.d1 = {15};
    CHECK(capacity(g, empty, CapacityOptions{}).value == 0.0);

    auto cond = square_condenser(g);
    CHECK(condenser_connected(g, cond));
    Condenser cut = cond;
    cut.C.clear();
    for (PointId x : cond.C)
        if (g.coords(Ball{4, x})[0] != 8) cut.C.push_back(x);
    CHECK_FALSE(condenser_connected(g, cut));
    auto fam = eigencurve_family(g, 1, 3);
    ModulusOptions mo;
    mo.n = 3;
    CapacityOptions co;
    co.n = 3;
    auto gap = capacity_modulus_gap(g, cut, fam, mo, co);
    CHECK(gap.disconnected);
    CHECK(gap.pmod == 0.0);
    CHECK(gap.cap == 0.0);
    CHECK(gap.gap == 0.0);

    Condenser overlap = cond;
    overlap.d1.push_back(cond.d0.front());
    overlap.d1 = normalized(overlap.d1);
    CHECK_THROWS_AS(validate_condenser(g, overlap), std::invalid_argument);
}

TEST_CASE("capacity against modulus") {
    for (double p : {2.0, 4.0})
        for (int n : {3, 4}) {
            GridSystem g({1.0, 1.0}, n + 1);
            auto fam = eigencurve_family(g, 1, n + 1);
            ModulusOptions mo;
            mo.p = p;
            mo.n = n;
            CapacityOptions co;
            co.p = p;
            co.n = n;
            auto r = capacity_modulus_gap(g, square_condenser(g), fam, mo, co);
            CHECK(r.holds);
            CHECK(r.pmod <= r.cap + 2.0 * co.tol);
        }
}

TEST_CASE("coordinate threshold on the isotropic grid") {
    GridSystem g({1.0, 1.0}, 7);
    auto s = coordinate_threshold_scan(g, 1, {1.5, 1.75, 2.25, 2.5}, 3, 7);
    CHECK(s.crossover);
    CHECK(s.expected == doctest::Approx(2.0));
    CHECK(std::abs(s.threshold - 2.0) <= 0.1);
}
