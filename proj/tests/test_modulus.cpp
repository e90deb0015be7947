#include "doctest.h"

#include <cmath>

#include "sqc/modulus.hpp"
#include "sqc/spaces.hpp"

using namespace sqc;

namespace {

ModulusOptions opts(double p, int n, double tol = 1e-8) {
    ModulusOptions o;
    o.p = p;
    o.n = n;
    o.tol = tol;
    return o;
}

// Grid search over gauges on the 2x2 tiling crossed by two horizontal lines.
double brute_force_2x2(const GridSystem& g, const CurveFamily& fam, double p) {
    const int steps = 20;
    double best = kInfinity;
    std::vector<double> rho(4);
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; b <= steps; ++b)
            for (int c = 0; c <= steps; ++c)
                for (int d = 0; d <= steps; ++d) {
                    rho = {a / double(steps), b / double(steps), c / double(steps), d / double(steps)};
                    bool ok = true;
                    for (const auto& curve : fam.curves) {
                        std::vector<char> used(4, 0);
                        double s = 0.0;
                        for (PointId x : curve) {
                            auto i = g.ball_of(x, 1).index;
                            if (!used[i]) s += rho[i];
                            used[i] = 1;
                        }
                        ok = ok && s >= 1.0 - 1e-12;
                    }
                    if (!ok) continue;
                    double v = 0.0;
                    for (double r : rho) v += std::pow(r, p);
                    best = std::min(best, v);
                }
    return best;
}

}  // namespace

TEST_CASE("generic program") {
    Program prog;
    prog.vars = 2;
    prog.w = {1.0, 1.0};
    prog.rows = {{{0, 1.0}, {1, 1.0}}};
    auto s = solve_program(prog, 2.0, 1e-10);
    CHECK(s.converged);
    CHECK(s.primal == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-6));
    auto s1 = solve_program(prog, 1.0, 1e-8);
    CHECK(s1.primal == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("square with horizontal lines") {
    for (int n = 1; n <= 4; ++n) {
        GridSystem g({1.0, 1.0}, n);
        auto fam = eigencurve_family(g, 1, n);
        REQUIRE(fam.size() == (std::size_t{1} << n));
        auto r = solve_modulus(g, fam, opts(2.0, n));
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.gap <= 1e-8);
        CHECK(r.min_admissibility >= 1.0 - 1e-9);
        for (double v : r.gauge) CHECK(v == doctest::Approx(std::ldexp(1.0, -n)).epsilon(1e-4));
    }
    GridSystem g({1.0, 1.0}, 2);
    auto fam = eigencurve_family(g, 1, 2);
    CHECK(solve_modulus(g, fam, opts(3.0, 2)).value == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("brute force on the 2x2 tiling") {
    GridSystem g({1.0, 1.0}, 1);
    auto fam = eigencurve_family(g, 1, 1);
    for (double p : {1.5, 2.0, 3.0}) {
        double bf = brute_force_2x2(g, fam, p);
        double v = solve_modulus(g, fam, opts(p, 1)).value;
        // the optimum rho = 1/2 lies on the search grid
        CHECK(v == doctest::Approx(bf).epsilon(1e-6));
    }
}

TEST_CASE("empty family has modulus zero") {
    GridSystem g({1.0, 1.0}, 3);
    CurveFamily empty;
    CHECK(solve_modulus(g, empty, opts(2.0, 3)).value == 0.0);
    CHECK(solve_packing_modulus(g, empty, opts(2.0, 3)).value == 0.0);
}

TEST_CASE("packing modulus on tilings") {
    for (int n = 1; n <= 3; ++n) {
        GridSystem g({1.0, 1.0}, n);
        auto fam = eigencurve_family(g, 1, n);
        for (double p : {1.5, 2.0, 3.0}) {
            double a = solve_modulus(g, fam, opts(p, n)).value;
            double b = solve_packing_modulus(g, fam, opts(p, n)).value;
            CHECK(b == doctest::Approx(a).epsilon(1e-6));
        }
    }
    GridSystem g({1.0, 1.0}, 1);
    auto fam = eigencurve_family(g, 1, 1);
    auto o = opts(2.0, 1);
    o.l = AdmissibleFn::constant(1);
    // literal encoding: every cell's enlargement is the square, so one row sum(rho) >= 1
    o.encoding = ShiftEncoding::literal;
    double v = solve_packing_modulus(g, fam, o, 4, 3).value;
    CHECK(v >= 0.25 - 1e-8);
    CHECK(v <= 1.0 + 1e-8);
    CHECK(v == doctest::Approx(0.25).epsilon(1e-6));
    // objective encoding: one shifted group of four packing cells, each line crosses two cells
    o.encoding = ShiftEncoding::objective;
    CHECK(solve_packing_modulus(g, fam, o, 4, 3).value == doctest::Approx(1.0).epsilon(1e-6));
    // constraint encoding: the square alone covers each line, so every cell needs rho >= 1
    o.encoding = ShiftEncoding::constraint;
    CHECK(solve_packing_modulus(g, fam, o, 4, 3).value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("uncoverable curve is infeasible") {
    ExplicitSystem s(3, 0, 0, AdmissibleFn::constant(1));
    s.add_ball(0, 0, {0, 1}, -1);
    CurveFamily fam;
    fam.add({0, 2}, 1.0);
    auto r = solve_modulus(s, fam, opts(2.0, 0));
    CHECK(r.infeasible);
    CHECK(r.value == kInfinity);
}

TEST_CASE("family validation") {
    CurveFamily fam;
    fam.add({0, 1}, 1.0);
    fam.weight[0] = -1.0;
    CHECK_THROWS_AS(fam.validate(), std::invalid_argument);
}

TEST_CASE("diffusivity on the isotropic grid") {
    GridSystem g({1.0, 1.0}, 8);
    auto fam = eigencurve_family(g, 1, 8);
    auto rep = check_diffusivity(g, fam, 2.0, AdmissibleFn::zero(), 1, 8);
    REQUIRE(rep.rows.size() == 8);
    double lo = kInfinity, hi = 0.0;
    for (const auto& r : rep.rows) {
        lo = std::min(lo, r.tau);
        hi = std::max(hi, r.tau);
    }
    CHECK(rep.diffuse);
    CHECK(hi <= 4.0 * lo);
    // each depth-d box meets 2^(8-d) lines of weight 2^-8 carrying mass 2^-d
    CHECK(hi == doctest::Approx(1.0));
    auto one = check_diffusivity(g, fam, 1.0, AdmissibleFn::zero(), 1, 8);
    // exponent 1 - p = 0: tau is the largest curve mass met by one ball of the range
    CHECK(one.rows.front().tau == doctest::Approx(0.5));
    auto bd = check_diffusivity_bourdon(g, fam, 2.0, 1, 8);
    // shadow 2^-d against scale 2^-d: the defect vanishes at every depth
    CHECK(bd.eta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("diffusivity decays below the vertical threshold") {
    HeintzeGridSpec spec;
    spec.mu = {1.0, 1.5};
    spec.depth = 6;
    auto g = build_heintze_grid(spec);
    auto fam = eigencurve_family(*g, 2, 6);
    auto rep = check_diffusivity(*g, fam, 5.0 / 3.0 - 0.3, AdmissibleFn::zero(), 1, 6);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].tau <= rep.rows[i - 1].tau * (1.0 + 1e-12));
    CHECK(rep.rows.back().tau < rep.rows.front().tau);
}

TEST_CASE("slope fit") {
    auto f = fit_slope({1, 2, 3, 4}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(-1.0));
    CHECK(f.residual == doctest::Approx(0.0));
}

TEST_CASE("small conformal dimension estimate") {
    GridSystem g({1.0, 1.0}, 5);
    auto fam = eigencurve_family(g, 1, 5);
    CdimOptions o;
    o.p_grid = {1.5, 1.75, 2.25, 2.5};
    o.n_lo = 2;
    o.n_hi = 5;
    o.base.tol = 1e-6;
    auto est = estimate_cdim(g, fam, o);
    CHECK(est.crossover);
    CHECK(est.p_star == doctest::Approx(2.0).epsilon(0.05));
}
