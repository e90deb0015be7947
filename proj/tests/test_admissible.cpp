#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sqc/admissible.hpp"

using namespace sqc;

TEST_CASE("admissible functions evaluate as ceilings") {
    CHECK(AdmissibleFn::constant(3)(100) == 3);
    CHECK(AdmissibleFn::zero().is_zero());
    auto lg = AdmissibleFn::logarithmic();
    for (long n = 1; n < 2000; ++n) CHECK(lg(n) == static_cast<long>(std::ceil(std::log(1.0 + n) - 1e-9)));
    CHECK(lg(0) == 0);
    auto pw = AdmissibleFn::power(1.0, 0.5);
    CHECK(pw(16) == 4);
    CHECK(pw(17) == 5);
    auto tb = AdmissibleFn::table(2, {1, 2, 3});
    CHECK(tb(0) == 1);
    CHECK(tb(3) == 2);
    CHECK(tb(99) == 3);
    CHECK_THROWS_AS(AdmissibleFn::power(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdmissibleFn::constant(-1), std::invalid_argument);
}

TEST_CASE("serialize round trip") {
    for (const auto& f : {AdmissibleFn::constant(2), AdmissibleFn::logarithmic(1.5), AdmissibleFn::power(2.0, 0.25),
                          AdmissibleFn::table(0, {0, 1, 1, 2})}) {
        auto g = AdmissibleFn::parse(f.serialize());
        for (long n = 0; n < 300; ++n) CHECK(g(n) == f(n));
    }
    CHECK_THROWS(AdmissibleFn::parse("bogus 1"));
}

TEST_CASE("certificate") {
    auto c = certify(AdmissibleFn::logarithmic(), 0, 1000);
    CHECK(c.ok());
    CHECK(c.doubling <= 2.0);
    auto bad = certify(AdmissibleFn::table(0, {3, 2, 1}), 0, 2);
    CHECK_FALSE(bad.monotone);
    CHECK(bad.first_decrease == 1);
}

TEST_CASE("dotplus of constants") {
    auto d = compose_dotplus(AdmissibleFn::constant(3), AdmissibleFn::constant(5), 0, 100);
    for (long n = 0; n <= 100; ++n) CHECK(d.fn(n) == 8);
}

TEST_CASE("dotplus with zero is the identity") {
    auto v = AdmissibleFn::power(1.0, 0.5);
    auto d = compose_dotplus(AdmissibleFn::zero(), v, 0, 500);
    for (long n = 0; n <= 500; ++n) CHECK(d.fn(n) == v(n));
}

TEST_CASE("dotplus of two logarithms matches direct evaluation") {
    const long hi = 1L << 15;
    auto lg = AdmissibleFn::logarithmic();
    auto d = compose_dotplus(lg, lg, 0, hi);
    auto cl = [](double x) { return static_cast<long>(std::ceil(std::log1p(x) - 1e-9)); };
    long mismatches = 0;
    for (long n = 0; n <= hi; ++n) {
        long a = n == 0 ? 0 : cl(static_cast<double>(n));
        long m = n - a;
        long expect = a + (m <= 0 ? 0 : cl(static_cast<double>(m)));
        if (d.fn(n) != expect) ++mismatches;
    }
    CHECK(mismatches == 0);
    CHECK(d.comparability >= 1.0);
    CHECK(d.comparability <= 2.0);
}

TEST_CASE("dotplus refuses empty domains") {
    CHECK_THROWS_AS(compose_dotplus(AdmissibleFn::table(10, {1}), AdmissibleFn::table(0, {1}), 0, 5),
                    std::domain_error);
}
