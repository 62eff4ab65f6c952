#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kg {

/// Element of N^k.
class Degree {
 public:
  Degree() = default;
  explicit Degree(std::size_t k) : c_(k, 0) {}
  Degree(std::initializer_list<int> c) : c_(c) { check(); }
  explicit Degree(std::vector<int> c) : c_(std::move(c)) { check(); }

  static Degree unit(std::size_t k, std::size_t i) {
    Degree d(k);
    d.c_.at(i) = 1;
    return d;
  }
  static Degree diagonal(std::size_t k, int n) { return Degree(std::vector<int>(k, n)); }

  std::size_t rank() const { return c_.size(); }
  int operator[](std::size_t i) const { return c_[i]; }
  int& operator[](std::size_t i) { return c_[i]; }
  const std::vector<int>& coords() const { return c_; }

  int total() const {
    int s = 0;
    for (int x : c_) s += x;
    return s;
  }
  int max() const { return c_.empty() ? 0 : *std::max_element(c_.begin(), c_.end()); }
  bool is_zero() const { return total() == 0; }

  friend Degree operator+(const Degree& a, const Degree& b) {
    same_rank(a, b);
    Degree r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Degree operator-(const Degree& a, const Degree& b) {
    same_rank(a, b);
    Degree r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
      r.c_[i] -= b.c_[i];
      if (r.c_[i] < 0) throw std::domain_error("degree subtraction leaves N^k");
    }
    return r;
  }
  friend Degree operator*(int n, const Degree& a) {
    Degree r = a;
    for (int& x : r.c_) x *= n;
    return r;
  }
  /// Componentwise order (partial).
  friend bool operator<=(const Degree& a, const Degree& b) {
    same_rank(a, b);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] > b.c_[i]) return false;
    return true;
  }
  friend bool operator==(const Degree& a, const Degree& b) = default;
  /// Lexicographic; only for use as an ordering key.
  friend std::strong_ordering lex_compare(const Degree& a, const Degree& b) { return a.c_ <=> b.c_; }

  friend Degree join(const Degree& a, const Degree& b) {
    same_rank(a, b);
    Degree r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = std::max(a.c_[i], b.c_[i]);
    return r;
  }
  friend Degree meet(const Degree& a, const Degree& b) {
    same_rank(a, b);
    Degree r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = std::min(a.c_[i], b.c_[i]);
    return r;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

 private:
  void check() const {
    for (int x : c_)
      if (x < 0) throw std::domain_error("negative degree coordinate");
  }
  static void same_rank(const Degree& a, const Degree& b) {
    if (a.c_.size() != b.c_.size()) throw std::invalid_argument("degree rank mismatch");
  }

  std::vector<int> c_;
};

/// Calls f(d) for every d with 0 <= d <= bound, in lexicographic order.
template <class F>
void for_each_degree(const Degree& bound, F&& f) {
  Degree d(bound.rank());
  while (true) {
    f(static_cast<const Degree&>(d));
    std::size_t i = bound.rank();
    while (i > 0) {
      --i;
      if (d[i] < bound[i]) {
        ++d[i];
        for (std::size_t j = i + 1; j < bound.rank(); ++j) d[j] = 0;
        break;
      }
      if (i == 0) return;
    }
    if (bound.rank() == 0) return;
  }
}

}  // namespace kg
