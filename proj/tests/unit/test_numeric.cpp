#include "doctest.h"

#include "kgraph/numeric.hpp"

using namespace kg;

TEST_CASE("rationals parse and print") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(to_string(parse_rational("10/4")) == "5/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK(pow(Rational(1, 2), 3) == Rational(1, 8));
  CHECK(pow(Rational(2), -2) == Rational(1, 4));
}

TEST_CASE("surds stay exact under products") {
  Surd half = Surd::sqrt(Rational(1, 2));
  CHECK(half.radicand() == 2);
  CHECK(half.coef() == Rational(1, 2));
  CHECK(half * half == Surd(Rational(1, 2)));
  CHECK(Surd::sqrt(Rational(9, 4)) == Surd(Rational(3, 2)));
  CHECK(Surd::sqrt(Rational(8)) == Surd(Rational(2), 2));
  CHECK((Surd::sqrt(Rational(2)) * Surd::sqrt(Rational(3))).radicand() == 6);
  CHECK(exact_sum(half, half).has_value());
  CHECK_FALSE(exact_sum(half, Surd::sqrt(Rational(3))).has_value());
}

TEST_CASE("scalars fall back to doubles") {
  Scalar a = Surd::sqrt(Rational(2));
  Scalar b = Surd::sqrt(Rational(3));
  Scalar s = a + b;
  CHECK_FALSE(s.exact());
  CHECK(s.value() == doctest::Approx(1.4142135623730951 + 1.7320508075688772));
  CHECK(approx_equal(a * a, Scalar(Rational(2)), 0.0));
  CHECK(approx_equal(s - b, a, 1e-12));
  CHECK_FALSE(approx_equal(a, b, 1e-9));
}
