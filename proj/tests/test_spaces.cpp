#include "doctest.h"

#include <cmath>

#include "sqc/spaces.hpp"

using namespace sqc;

TEST_CASE("Heintze grids") {
    HeintzeGridSpec iso;
    iso.mu = {1.0, 1.0};
    iso.depth = 3;
    CHECK(build_heintze_grid(iso)->num_points() == 64);
    HeintzeGridSpec an;
    an.mu = {1.0, 1.5};
    an.depth = 4;
    auto g = build_heintze_grid(an);
    CHECK(g->num_balls(4) == 1024);
    CHECK(an.trace() == doctest::Approx(2.5));
    for (int n = 1; n <= 4; ++n) {
        double expected = std::exp2(n * an.trace());
        CHECK(static_cast<double>(g->num_balls(n)) >= expected);
        CHECK(static_cast<double>(g->num_balls(n)) <= 2.0 * expected);
    }
    CHECK(check_axioms(*g, 0, 4).all_pass());
    HeintzeGridSpec bad;
    bad.mu = {1.5, 2.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    HeintzeGridSpec huge;
    huge.mu = {1.0, 1.0};
    huge.depth = 20;
    huge.max_points = 1000;
    CHECK_THROWS_AS(build_heintze_grid(huge), std::length_error);
}

TEST_CASE("eigencurve families") {
    GridSystem iso({1.0, 1.0}, 3);
    auto f = eigencurve_family(iso, 1, 3);
    CHECK(f.size() == 8);
    for (double w : f.weight) CHECK(w == doctest::Approx(0.125));
    GridSystem an({1.0, 1.5}, 5);
    CHECK(eigencurve_family(an, 1, 4).size() == 64);
    // lines along the fast axis: transverse count grows by 2^(tr - 1) = 2^(3/2) per depth on average
    double r = static_cast<double>(eigencurve_family(an, 1, 4).size()) / eigencurve_family(an, 1, 2).size();
    CHECK(r == doctest::Approx(std::exp2(2 * 1.5)));
    f.validate();
}

TEST_CASE("tilted plane balls") {
    auto one = tilted_plane_ball(1.0);
    CHECK(one.width == doctest::Approx(2.0));
    CHECK(one.height == doctest::Approx(2.0));
    CHECK(one.log_asphericity == doctest::Approx(0.0));
    auto e1 = tilted_plane_ball(std::exp(-1.0));
    CHECK(e1.width / e1.height == doctest::Approx(2.0).epsilon(1e-14));
    auto e10 = tilted_plane_ball(std::exp(-10.0));
    CHECK(e10.log_asphericity >= std::log(10.0));
    CHECK(e10.log_asphericity <= std::log(11.0) + 1e-12);
    CHECK_THROWS_AS(tilted_plane_ball(0.0), std::invalid_argument);
}

TEST_CASE("right-angled pentagon group") {
    CoxeterPolygonSpec spec;
    spec.r = 5;
    auto s = coxeter_growth(spec, GrowthMethod::series);
    CHECK(s.hyperbolic);
    CHECK(s.r_star == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(std::abs(s.omega - std::acosh(1.5)) <= 1e-9);
    auto b = coxeter_growth(spec, GrowthMethod::bfs, 10);
    REQUIRE(b.sphere.size() >= 3);
    // sphere sizes of the right-angled pentagon group: 1, 5, 15, ...
    CHECK(b.sphere[0] == 1);
    CHECK(b.sphere[1] == 5);
    CHECK(b.sphere[2] == 15);
}

TEST_CASE("growth series against word counts") {
    // the series coefficients of numerator / denominator are the sphere sizes
    CoxeterPolygonSpec spec;
    spec.r = 6;
    auto s = coxeter_growth(spec, GrowthMethod::series);
    auto b = coxeter_growth(spec, GrowthMethod::bfs, 8);
    std::vector<double> coeff(9, 0.0);
    for (std::size_t n = 0; n < coeff.size(); ++n) {
        double v = n < s.numerator.size() ? double(s.numerator[n]) : 0.0;
        for (std::size_t j = 1; j <= n && j < s.denominator.size(); ++j) v -= double(s.denominator[j]) * coeff[n - j];
        coeff[n] = v / double(s.denominator[0]);
    }
    for (std::size_t n = 0; n < coeff.size() && n < b.sphere.size(); ++n)
        CHECK(coeff[n] == doctest::Approx(double(b.sphere[n])));
}

TEST_CASE("square group is not hyperbolic") {
    CoxeterPolygonSpec spec;
    spec.r = 4;
    CHECK_FALSE(spec.hyperbolic());
    auto s = coxeter_growth(spec, GrowthMethod::series);
    CHECK_FALSE(s.hyperbolic);
    CHECK(s.omega == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("BFS refuses non-right-angled groups") {
    CoxeterPolygonSpec spec;
    spec.r = 5;
    spec.m = {2, 3, 2, 3, 2};
    CHECK_THROWS_AS(coxeter_growth(spec, GrowthMethod::bfs, 5), std::invalid_argument);
}

TEST_CASE("building conformal dimension") {
    CHECK(building_cdim_formula(5, 2).formula == doctest::Approx(1.0));
    auto b53 = building_cdim_formula(5, 3);
    CHECK(b53.formula == doctest::Approx(1.0 + std::log(2.0) / std::acosh(1.5)).epsilon(1e-14));
    CHECK(std::abs(b53.formula - 1.7202100) < 1e-6);
    auto b63 = building_cdim_formula(6, 3);
    CHECK(b63.formula == doctest::Approx(1.0 + std::log(2.0) / std::log(2.0 + std::sqrt(3.0))).epsilon(1e-14));
    for (auto [p, q] : {std::pair{5, 3}, std::pair{6, 3}, std::pair{5, 5}, std::pair{7, 2}, std::pair{8, 4}}) {
        auto b = building_cdim_formula(p, q);
        CHECK(std::abs(b.formula - b.cross_check) <= 1e-12);
    }
    CHECK(cdim_from_T(1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(building_cdim_formula(4, 3), std::domain_error);
}
