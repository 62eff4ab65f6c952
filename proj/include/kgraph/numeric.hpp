#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace kg {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text or q == 0.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational pow(const Rational& base, long exponent);
bool is_perfect_square(const Rational& q);

/// Exact real number coef * sqrt(radicand), radicand a positive square-free integer
/// (square factors are extracted by trial division; equality never depends on that).
class Surd {
 public:
  Surd() = default;
  Surd(const Rational& coef);  // NOLINT(google-explicit-constructor)
  Surd(const Rational& coef, const Integer& radicand);

  /// sqrt(q) for q >= 0.
  static Surd sqrt(const Rational& q);

  const Rational& coef() const { return coef_; }
  const Integer& radicand() const { return radicand_; }
  bool is_zero() const { return sgn(coef_) == 0; }
  bool is_rational() const { return radicand_ == 1; }
  double to_double() const;
  /// coef^2 * radicand
  Rational square() const;
  std::string str() const;

  friend Surd operator*(const Surd& a, const Surd& b);
  friend Surd operator-(const Surd& a);
  friend bool operator==(const Surd& a, const Surd& b);
  /// a + b is exact only when the radicands agree.
  friend std::optional<Surd> exact_sum(const Surd& a, const Surd& b);

 private:
  Rational coef_ = 0;
  Integer radicand_ = 1;
};

/// Operator entry: exact surd when available, otherwise a double.
class Scalar {
 public:
  Scalar() : exact_(Surd{}) {}
  Scalar(const Surd& s) : exact_(s), approx_(s.to_double()) {}  // NOLINT
  Scalar(const Rational& q) : Scalar(Surd(q)) {}                // NOLINT
  static Scalar approximate(double v);

  bool exact() const { return exact_.has_value(); }
  const Surd& surd() const { return *exact_; }
  double value() const { return approx_; }
  bool is_zero(double tol) const;
  Scalar conj() const { return *this; }
  std::string str() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  /// Exact comparison when both sides are exact, |a-b| <= tol otherwise.
  friend bool approx_equal(const Scalar& a, const Scalar& b, double tol);

 private:
  std::optional<Surd> exact_;
  double approx_ = 0.0;
};

}  // namespace kg
