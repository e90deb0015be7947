#include "doctest.h"

#include <algorithm>

#include "sqc/covering.hpp"

using namespace sqc;

TEST_CASE("singleton cover") {
    GridSystem g({1.0, 1.0}, 3);
    Ball b{2, 5};
    auto c = greedy_disjoint_subcover(g, {b}, g.realize(b));
    REQUIRE(c.size() == 1);
    CHECK(c[0] == b);
}

TEST_CASE("two overlapping intervals keep the first") {
    // ground {0..3}; depth 1 balls [0,2] and [1,3], depth 0 is everything
    ExplicitSystem s(4, 0, 1, AdmissibleFn::constant(1));
    s.add_ball(0, 1, {0, 1, 2, 3}, -1);
    s.add_ball(1, 1, {0, 1, 2}, 0);
    s.add_ball(1, 2, {1, 2, 3}, 0);
    PointSet A{0, 1, 2, 3};
    auto c = greedy_disjoint_subcover(s, {Ball{1, 0}, Ball{1, 1}}, A);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == Ball{1, 0});
    CHECK(q_shift_covers(s, c, A));
    // the other single selection also works; both are legal outputs of the lemma
    CHECK(q_shift_covers(s, {Ball{1, 1}}, A));
}

TEST_CASE("coarse cells are processed first") {
    GridSystem g({1.0, 1.0}, 2);
    std::vector<Ball> cover;
    for (std::size_t i = 0; i < 16; ++i) cover.push_back(Ball{2, i});
    for (std::size_t i = 0; i < 4; ++i) cover.push_back(Ball{1, i});
    auto c = greedy_disjoint_subcover(g, cover, g.all_points());
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<Ball>{{1, 0}, {1, 1}, {1, 2}, {1, 3}});
    CHECK(pairwise_disjoint(g, c));
}

TEST_CASE("uncovered point is reported") {
    GridSystem g({1.0}, 3);
    try {
        greedy_disjoint_subcover(g, {Ball{3, 0}}, PointSet{0, 1});
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.witness() == 1);
    }
}

TEST_CASE("packing of one cell") {
    GridSystem g({1.0, 1.0}, 3);
    auto P = max_packing(g, PointSet{9}, AdmissibleFn::zero(), 3, 0);
    CHECK(P.pairs.size() == 1);
    CHECK(is_valid_packing(P));
    CHECK(is_maximal(g, P));
}

TEST_CASE("packings of the square") {
    for (int n = 1; n <= 3; ++n) {
        GridSystem g({1.0, 1.0}, n + 1);
        auto P = max_packing(g, g.all_points(), AdmissibleFn::zero(), n, 0);
        CHECK(P.pairs.size() == (std::size_t{1} << (2 * n)));
        CHECK(is_valid_packing(P));
        CHECK(is_maximal(g, P));
        for (std::uint64_t seed : {0u, 3u, 11u}) {
            auto Q = max_packing(g, g.all_points(), AdmissibleFn::constant(1), n, seed);
            // outer sets are the parents, so one child per parent: 4^n / 4
            CHECK(Q.pairs.size() == (std::size_t{1} << (2 * n - 2)));
            CHECK(is_valid_packing(Q));
            CHECK(is_maximal(g, Q));
        }
    }
}
