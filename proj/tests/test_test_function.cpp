#include <cmath>

#include "doctest.h"
#include "maxmart/test_function.hpp"

using namespace maxmart;

TEST_CASE("indicator primitives and tails") {
    const auto f = TestFunction::indicator(2.0);
    CHECK(f.value(1.0) == 0.0);
    CHECK(f.value(3.0) == 1.0);
    CHECK(f.primitive(1.5) == 0.0);
    CHECK(f.primitive(5.0) == doctest::Approx(3.0));
    CHECK(f.reciprocal_tail(1.0) == doctest::Approx(0.5));   // 1/max(a,s)
    CHECK(f.reciprocal_tail(4.0) == doctest::Approx(0.25));
}

TEST_CASE("constant function") {
    const auto f = TestFunction::constant(3.0);
    CHECK(f.value(0.1) == 3.0);
    CHECK(f.primitive(2.0) == doctest::Approx(6.0));
    CHECK(f.reciprocal_tail(2.0) == doctest::Approx(1.5));
    CHECK(f.h(0.7) == 0.0);
}

TEST_CASE("piecewise linear matches quadrature") {
    const auto f = TestFunction::piecewise_linear({1.0, 2.0, 4.0}, {0.5, 1.5, 0.0});
    const auto g = TestFunction::generic([&](double x) { return f.value(x); });
    for (double x : {0.5, 1.2, 2.5, 3.9, 6.0}) {
        CHECK(f.value(x) == doctest::Approx(g.value(x)));
        CHECK(f.primitive(x) == doctest::Approx(g.primitive(x)).epsilon(1e-7));
        if (x > 0.0) CHECK(f.reciprocal_tail(x) == doctest::Approx(g.reciprocal_tail(x)).epsilon(1e-6));
    }
}

TEST_CASE("h transform closed forms") {
    const auto ind = TestFunction::indicator(3.0);
    CHECK(ind.h(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(ind.h(2.9) == doctest::Approx(1.0 / 3.0));
    CHECK(ind.h(3.0) == 0.0);
    CHECK(ind.h(4.0) == 0.0);
}

TEST_CASE("exp compensator closed forms match quadrature") {
    const auto c = TestFunction::constant(1.0);
    CHECK(c.exp_compensator(2.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));
    const auto ind = TestFunction::indicator(1.0);
    CHECK(ind.exp_compensator(0.5) == 0.0);
    CHECK(ind.exp_compensator(3.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));
    const auto gen = TestFunction::generic([](double s) { return 0.3 * s; });
    // int_0^2 (1 - e^{-0.3 s}) ds = 2 + (e^{-0.6} - 1)/0.3
    CHECK(gen.exp_compensator(2.0) ==
          doctest::Approx(2.0 + (std::exp(-0.6) - 1.0) / 0.3).epsilon(1e-7));
}

TEST_CASE("invalid constructions") {
    CHECK_THROWS_AS(TestFunction::piecewise_linear({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TestFunction::piecewise_linear({2.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
    const auto f = TestFunction::indicator(1.0);
    CHECK_THROWS_AS(f.reciprocal_tail(0.0), std::invalid_argument);
}
