#include "kgraph/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::string s(text);
  auto valid = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  Rational q{Integer(num), Integer(den)};
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (exponent == 1) return base;
  Rational b = exponent < 0 ? Rational(1) / base : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
  // powers of coprime integers stay coprime
  Rational r;
  mpq_set_num(r.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(r.get_mpq_t(), den.get_mpz_t());
  return r;
}

bool is_perfect_square(const Rational& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

namespace {

// Splits n = s^2 * r with r square-free as far as trial division can tell.
void extract_square(Integer& n, Integer& root) {
  root = 1;
  if (n <= 1) return;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    n = 1;
    return;
  }
  for (unsigned long p = 2; p < 4096; p += (p == 2 ? 1 : 2)) {
    Integer pp = p * p;
    while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
      n /= pp;
      root *= p;
    }
    if (pp > n) break;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    root *= r;
    n = 1;
  }
}

}  // namespace

Surd::Surd(const Rational& coef) : coef_(coef), radicand_(1) {}

Surd::Surd(const Rational& coef, const Integer& radicand) : coef_(coef), radicand_(radicand) {
  if (radicand_ < 0) throw std::invalid_argument("negative radicand");
  if (radicand_ == 0 || sgn(coef_) == 0) {
    coef_ = 0;
    radicand_ = 1;
    return;
  }
  Integer root;
  extract_square(radicand_, root);
  coef_ *= root;
}

Surd Surd::sqrt(const Rational& q) {
  if (sgn(q) < 0) throw std::invalid_argument("sqrt of negative rational");
  if (sgn(q) == 0) return Surd{};
  Integer den = q.get_den();
  return Surd(Rational(Integer(1), den), q.get_num() * den);
}

double Surd::to_double() const { return coef_.get_d() * std::sqrt(radicand_.get_d()); }

Rational Surd::square() const { return coef_ * coef_ * Rational(radicand_); }

std::string Surd::str() const {
  if (radicand_ == 1) return coef_.get_str();
  return coef_.get_str() + "*sqrt(" + radicand_.get_str() + ")";
}

Surd operator*(const Surd& a, const Surd& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.radicand_.get_mpz_t(), b.radicand_.get_mpz_t());
  Surd r;
  r.coef_ = a.coef_ * b.coef_ * Rational(g);
  r.radicand_ = (a.radicand_ / g) * (b.radicand_ / g);
  if (sgn(r.coef_) == 0) r.radicand_ = 1;
  return r;
}

Surd operator-(const Surd& a) {
  Surd r = a;
  r.coef_ = -r.coef_;
  return r;
}

bool operator==(const Surd& a, const Surd& b) {
  return sgn(a.coef_) == sgn(b.coef_) && a.square() == b.square();
}

std::optional<Surd> exact_sum(const Surd& a, const Surd& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.radicand_ != b.radicand_) return std::nullopt;
  Surd r = a;
  r.coef_ += b.coef_;
  if (sgn(r.coef_) == 0) r.radicand_ = 1;
  return r;
}

Scalar Scalar::approximate(double v) {
  Scalar s;
  s.exact_.reset();
  s.approx_ = v;
  return s;
}

bool Scalar::is_zero(double tol) const {
  if (exact_) return exact_->is_zero();
  return std::abs(approx_) <= tol;
}

std::string Scalar::str() const {
  if (exact_) return exact_->str();
  return std::to_string(approx_);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (auto s = exact_sum(*a.exact_, *b.exact_)) return Scalar(*s);
  }
  return Scalar::approximate(a.approx_ + b.approx_);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (b.exact_) return a + Scalar(-*b.exact_);
  return Scalar::approximate(a.approx_ - b.approx_);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar(*a.exact_ * *b.exact_);
  return Scalar::approximate(a.approx_ * b.approx_);
}

bool approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return std::abs(a.approx_ - b.approx_) <= tol;
}

}  // namespace kg
