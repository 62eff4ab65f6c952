#pragma once

#include "kgraph/degree.hpp"
#include "kgraph/kgraph.hpp"

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kg {

/// Finite path stored in color-normal form: all color-1 edges, then color 2, and so on.
class FinPath {
 public:
  FinPath() = default;
  static FinPath vertex(const KGraph& g, VertexId v);

  VertexId range() const { return range_; }
  VertexId source() const { return source_; }
  const Degree& degree() const { return degree_; }
  const std::vector<EdgeId>& edges() const { return edges_; }
  bool is_vertex() const { return edges_.empty(); }

  friend bool operator==(const FinPath& a, const FinPath& b) { return a.range_ == b.range_ && a.edges_ == b.edges_; }
  friend std::strong_ordering operator<=>(const FinPath& a, const FinPath& b) {
    if (auto c = a.range_ <=> b.range_; c != 0) return c;
    if (auto c = lex_compare(a.degree_, b.degree_); c != 0) return c;
    return a.edges_ <=> b.edges_;
  }

 private:
  friend FinPath make_path(const KGraph&, std::span<const EdgeId>);
  friend FinPath make_path_from(const KGraph&, VertexId, std::span<const EdgeId>);
  VertexId range_ = 0;
  VertexId source_ = 0;
  Degree degree_;
  std::vector<EdgeId> edges_;
};

/// Normalizes an arbitrary composable edge word. Throws std::invalid_argument if not composable.
FinPath make_path(const KGraph& g, std::span<const EdgeId> word);
/// As make_path, but also accepts the empty word (the vertex v).
FinPath make_path_from(const KGraph& g, VertexId v, std::span<const EdgeId> word);

/// Reorders a composable word by square moves so that its colors follow `target`.
std::vector<EdgeId> arrange(const KGraph& g, std::vector<EdgeId> word, const std::vector<int>& target);

FinPath compose(const KGraph& g, const FinPath& lambda, const FinPath& nu);
FinPath power(const KGraph& g, const FinPath& lambda, int n);
/// The unique (mu, nu) with lambda = mu nu and d(mu) = m. Requires m <= d(lambda).
std::pair<FinPath, FinPath> factorize(const KGraph& g, const FinPath& lambda, const Degree& m);
/// lambda(m, n) for m <= n <= d(lambda).
FinPath subpath(const KGraph& g, const FinPath& lambda, const Degree& m, const Degree& n);
/// Vertex lambda(m).
VertexId vertex_at(const KGraph& g, const FinPath& lambda, const Degree& m);
bool has_prefix(const KGraph& g, const FinPath& xi, const FinPath& lambda);

/// v Lambda^n, in lexicographic order of normal forms.
std::vector<FinPath> enumerate_paths(const KGraph& g, VertexId v, const Degree& n);
/// Lambda^n v (paths with source v).
std::vector<FinPath> enumerate_paths_from(const KGraph& g, VertexId v, const Degree& n);
/// All paths with degree <= bound (componentwise), every range.
std::vector<FinPath> enumerate_paths_upto(const KGraph& g, const Degree& bound);

/// Lambda^min(lambda, eta): pairs (alpha, beta) with lambda alpha = eta beta of degree d(lambda) v d(eta).
std::vector<std::pair<FinPath, FinPath>> lambda_min(const KGraph& g, const FinPath& lambda, const FinPath& eta);
/// Minimal common extensions.
std::vector<FinPath> mce(const KGraph& g, const FinPath& lambda, const FinPath& eta);

std::string render(const KGraph& g, const FinPath& lambda);
/// Accepts a vertex name, or edge names separated by '.' or '|' in any composable order.
FinPath parse_path(const KGraph& g, std::string_view text);

/// Finite disjoint union of cylinder sets Z(lambda_1) + ... + Z(lambda_n).
class CylUnion {
 public:
  CylUnion() = default;
  explicit CylUnion(std::vector<FinPath> parts);
  const std::vector<FinPath>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  friend bool operator==(const CylUnion&, const CylUnion&) = default;

 private:
  std::vector<FinPath> parts_;
};

CylUnion cyl(const FinPath& lambda);
/// Sorts, removes duplicates and parts already covered by a shorter part.
CylUnion normalize(const KGraph& g, std::vector<FinPath> parts);
CylUnion cyl_intersect(const KGraph& g, const CylUnion& a, const CylUnion& b);
CylUnion cyl_subtract(const KGraph& g, const CylUnion& a, const CylUnion& b);
CylUnion cyl_union(const KGraph& g, const CylUnion& a, const CylUnion& b);
/// True when the parts are pairwise disjoint and cover exactly Z(lambda).
bool cyl_is_partition(const KGraph& g, const FinPath& lambda, const std::vector<FinPath>& parts);
/// Refines every part to degree d (parts of larger degree are kept as they are).
std::vector<FinPath> refine_to(const KGraph& g, const CylUnion& a, const Degree& d);

std::string render(const KGraph& g, const CylUnion& a);
CylUnion parse_cyl_union(const KGraph& g, std::string_view text);

}  // namespace kg
