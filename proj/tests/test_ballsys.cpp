#include "doctest.h"

#include <cmath>
#include <sstream>

#include "sqc/ballsys.hpp"

using namespace sqc;

namespace {

// Brute-force deepest dyadic interval holding both points of [0,1).
int deepest_common(double x, double y, int max_depth) {
    for (int d = max_depth; d >= 0; --d) {
        double scale = std::ldexp(1.0, d);
        if (std::floor(x * scale) == std::floor(y * scale)) return d;
    }
    return 0;
}

}  // namespace

TEST_CASE("grid layer sizes") {
    GridSystem iso({1.0, 1.0}, 3);
    CHECK(iso.num_points() == 64);
    CHECK(iso.num_balls(3) == 64);
    GridSystem an({1.0, 1.5}, 4);
    CHECK(an.num_points() == 1024);
    for (int n = 0; n <= 4; ++n)
        CHECK(an.num_balls(n) == (std::size_t{1} << n) * (std::size_t{1} << static_cast<int>(std::ceil(1.5 * n))));
}

TEST_CASE("dyadic square satisfies the axioms") {
    GridSystem g({1.0, 1.0}, 6);
    auto rep = check_axioms(g, 0, 6);
    for (const auto& r : rep.results) {
        INFO(r.name << ": " << r.witness);
        CHECK(r.pass);
    }
    CHECK(rep.all_pass());
}

TEST_CASE("anisotropic grid satisfies the axioms") {
    GridSystem g({1.0, 1.5}, 4);
    CHECK(check_axioms(g, 0, 4).all_pass());
}

TEST_CASE("shrinking shift breaks SC1(i)") {
    ExplicitSystem s(3, 0, 1, AdmissibleFn::constant(2));
    s.add_ball(0, 0, {0}, -1);
    s.add_ball(1, 0, {0, 1, 2}, 0);
    auto rep = check_axioms(s, 0, 1);
    CHECK_FALSE(rep.get("SC1(i)").pass);
    CHECK_FALSE(rep.get("SC1(i)").witness.empty());
}

TEST_CASE("single point ground set passes SC3") {
    ExplicitSystem s(1, 0, 2, AdmissibleFn::constant(1));
    s.add_ball(0, 0, {0}, -1);
    s.add_ball(1, 0, {0}, 0);
    s.add_ball(2, 0, {0}, 0);
    CHECK(check_axioms(s, 0, 2).get("SC3").pass);
}

TEST_CASE("quasidistance on the dyadic line") {
    GridSystem g({1.0}, 8);
    PointId x = g.point_at({0.0});
    CHECK(quasidistance_rho(g, x, x).value == 0.0);
    PointId y = g.point_at({0.75});
    CHECK(quasidistance_rho(g, x, y).value == doctest::Approx(1.0));
    PointId z = g.point_at({1.0 / 32.0});
    auto q = quasidistance_rho(g, x, z);
    CHECK(q.depth == 4);
    CHECK(q.value == doctest::Approx(std::exp(-4.0)));
    for (PointId a = 0; a < g.num_points(); a += 7)
        for (PointId b = 0; b < g.num_points(); b += 5) {
            if (a == b) continue;
            int d = deepest_common(g.position(a)[0], g.position(b)[0], 8);
            CHECK(quasidistance_rho(g, a, b).depth == d);
        }
}

TEST_CASE("entourages are nested and compose") {
    const int N = 6;
    GridSystem g({1.0}, N);
    const std::size_t P = g.num_points();
    std::vector<std::vector<char>> E(N + 1, std::vector<char>(P * P));
    for (int n = 0; n <= N; ++n)
        for (PointId x = 0; x < P; ++x)
            for (PointId y = 0; y < P; ++y) E[n][x * P + y] = entourage_contains(g, n, x, y);
    for (int n = 0; n <= N; ++n)
        for (PointId x = 0; x < P; ++x) CHECK(E[n][x * P + x]);
    long nesting = 0, composition = 0;
    for (int n = 0; n < N; ++n)
        for (std::size_t i = 0; i < P * P; ++i)
            if (E[n + 1][i] && !E[n][i]) ++nesting;
    const long q = g.q()(0);
    for (int n = 1; n <= 3; ++n) {
        int m = static_cast<int>(std::max<long>(2L * n, 2L * q));
        if (m > N) continue;
        for (PointId x = 0; x < P; ++x)
            for (PointId y = 0; y < P; ++y) {
                if (!E[m][x * P + y]) continue;
                for (PointId z = 0; z < P; ++z)
                    if (E[m][y * P + z] && !E[n][x * P + z]) ++composition;
            }
    }
    CHECK(nesting == 0);
    CHECK(composition == 0);
}

TEST_CASE("round sets and outer rings by exhaustive witness search") {
    const int N = 4;
    GridSystem g({1.0, 1.0}, N);
    auto brute_round = [&](const PointSet& a, long k, int n) {
        for (int d = n; d <= N; ++d)
            for (std::size_t i = 0; i < g.num_balls(d); ++i) {
                Ball b{d, i};
                if (includes(a, g.realize(b)) && includes(g.realize(g.shift(b, k)), a)) return true;
            }
        return false;
    };
    Ball cell = g.ball_at(N, {5, 6});
    CHECK(find_round(g, g.realize(cell), AdmissibleFn::zero(), N) == cell);

    for (std::size_t cx : {4u, 5u, 7u}) {
        Ball left = g.ball_at(N, {cx, 6});
        Ball right = g.ball_at(N, {cx + 1, 6});
        PointSet a = set_union(g.realize(left), g.realize(right));
        for (long k = 0; k <= 3; ++k) {
            auto w = find_round(g, a, AdmissibleFn::constant(k), N - 1);
            CHECK(w.has_value() == brute_round(a, k, N - 1));
            if (w) {
                CHECK(includes(a, g.realize(*w)));
                CHECK(includes(g.realize(g.shift(*w, k)), a));
            }
        }
    }

    PointSet block;
    for (std::size_t x = 4; x <= 6; ++x)
        for (std::size_t y = 5; y <= 7; ++y) block = set_union(block, g.realize(g.ball_at(N, {x, y})));
    auto o = find_outer_ring(g, g.realize(cell), block, AdmissibleFn::constant(1), N);
    REQUIRE(o.has_value());
    CHECK(includes(g.realize(*o), g.realize(cell)));
    CHECK(includes(block, g.realize(g.shift(*o, 1))));
}

TEST_CASE("system serialization round trip") {
    GridSystem g({1.0, 1.0}, 2);
    std::stringstream ss;
    write_system(ss, g);
    auto back = read_system(ss);
    REQUIRE(back);
    CHECK(back->num_points() == g.num_points());
    for (int d = 0; d <= 2; ++d) {
        REQUIRE(back->num_balls(d) == g.num_balls(d));
        for (std::size_t i = 0; i < g.num_balls(d); ++i) {
            CHECK(back->realize(Ball{d, i}) == g.realize(Ball{d, i}));
            CHECK(back->shift(Ball{d, i}, 1) == g.shift(Ball{d, i}, 1));
        }
    }
    CHECK(parse_ranges(format_ranges({1, 2, 3, 7, 9, 10})) == PointSet{1, 2, 3, 7, 9, 10});
}

TEST_CASE("metric ball system") {
    MetricBallSystem m({{0.0}, {0.3}, {0.6}, {0.9}}, 0, 3);
    CHECK(m.realize(Ball{0, 0}) == PointSet{0, 1, 2, 3});
    CHECK(m.realize(Ball{2, 1}) == PointSet{1});
    CHECK(m.dist(0, 3) == doctest::Approx(0.9));
}
