#pragma once

#include "kgraph/paths.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kg {

/// Eventually periodic infinite path prefix * cycle^infinity, kept in canonical form:
/// d(prefix) = s(1,...,1) and d(cycle) = t(1,...,1) with s, then t, minimal.
class InfPath {
 public:
  InfPath() = default;
  const FinPath& prefix() const { return prefix_; }
  const FinPath& cycle() const { return cycle_; }
  VertexId range() const { return prefix_.range(); }

  friend bool operator==(const InfPath&, const InfPath&) = default;
  friend std::strong_ordering operator<=>(const InfPath& a, const InfPath& b) {
    if (auto c = a.prefix_ <=> b.prefix_; c != 0) return c;
    return a.cycle_ <=> b.cycle_;
  }

 private:
  friend InfPath make_inf_path(const KGraph&, const FinPath&, const FinPath&);
  FinPath prefix_;
  FinPath cycle_;
};

/// Requires s(prefix) = r(cycle) = s(cycle) and d(cycle) >= (1,...,1).
InfPath make_inf_path(const KGraph& g, const FinPath& prefix, const FinPath& cycle);
/// x(0, q).
FinPath window(const KGraph& g, const InfPath& x, const Degree& q);
/// x(p, q) for p <= q.
FinPath segment(const KGraph& g, const InfPath& x, const Degree& p, const Degree& q);
bool in_cylinder(const KGraph& g, const InfPath& x, const FinPath& lambda);
/// sigma^m(x).
InfPath shift(const KGraph& g, const InfPath& x, const Degree& m);
/// lambda x, requiring s(lambda) = r(x).
InfPath prefix_path(const KGraph& g, const FinPath& lambda, const InfPath& x);
bool inf_path_eq(const InfPath& x, const InfPath& y);
/// Independent equality test: compares x(0, W) and y(0, W) on a window covering both periods.
bool window_equal(const KGraph& g, const InfPath& x, const InfPath& y);
/// {sigma^n(x) : n in N^k}, sorted.
std::vector<InfPath> tail_set(const KGraph& g, const InfPath& x);
/// x ~ y iff sigma^m(x) = sigma^n(y) for some m, n.
bool same_orbit(const KGraph& g, const InfPath& x, const InfPath& y);

std::string render(const KGraph& g, const InfPath& x);
/// "<prefix> * <cycle>".
InfPath parse_inf_path(const KGraph& g, std::string_view text);

struct CofinalityResult {
  bool cofinal = true;
  bool applicable = true;  // requires a finite source-free graph
  std::string note;
  std::optional<VertexId> witness_vertex;
  std::optional<InfPath> witness_path;
};

/// Decides cofinality of a finite source-free k-graph. The witness (w, x) satisfies
/// w Lambda s(x(n)) empty for every n.
CofinalityResult is_cofinal(const KGraph& g);

/// vertices w with v Lambda w nonempty.
std::vector<bool> reachable_sources(const KGraph& g, VertexId v);

struct PeriodicPair {
  FinPath lambda, nu;
};

struct PeriodicityReport {
  int depth = 0;
  std::vector<PeriodicPair> pairs;
  /// Basis of the subgroup of Z^k generated by d(lambda) - d(nu), in echelon form.
  std::vector<std::vector<long>> per_group;
  std::vector<VertexId> h_per;
  /// Character on Per given as angles in turns; filled by the representation layer.
  std::vector<std::string> character_candidate;
};

/// Certifies lambda x = nu x on Z(s(lambda)) by comparing all continuations of degree
/// (depth, ..., depth) and (depth + 1, ..., depth + 1).
bool is_periodic_pair(const KGraph& g, const FinPath& lambda, const FinPath& nu, int depth);
PeriodicityReport periodic_pairs(const KGraph& g, int depth);
/// Membership of an integer vector in the lattice spanned by an echelon basis.
bool lattice_contains(const std::vector<std::vector<long>>& basis, std::vector<long> v);
std::vector<std::vector<long>> lattice_basis(std::vector<std::vector<long>> gens, std::size_t k);

}  // namespace kg
