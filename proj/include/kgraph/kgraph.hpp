#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kg {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Colors are 0-based in memory and 1-based in files.
struct Edge {
  std::string name;
  int color = 0;
  VertexId range = 0;
  VertexId source = 0;
};

/// e f = fhat ehat with color(e) < color(f).
struct Square {
  EdgeId e, f, fhat, ehat;
};

class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& msg, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

bool valid_name(std::string_view name);

class KGraph {
 public:
  class Builder;

  int rank() const { return rank_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  int color(EdgeId e) const { return edges_[e].color; }
  /// Edges of the given color with range v, i.e. v Lambda^{e_i}.
  const std::vector<EdgeId>& edges_into(VertexId v, int color) const { return into_[v][color]; }
  /// Edges of the given color with source v, i.e. Lambda^{e_i} v.
  const std::vector<EdgeId>& edges_out(VertexId v, int color) const { return out_[v][color]; }
  const std::vector<Square>& squares() const { return squares_; }

  /// All rewrites of the composable pair x y (distinct colors) into y' x' with the colors swapped.
  /// A valid graph always returns exactly one.
  std::vector<std::pair<EdgeId, EdgeId>> swaps(EdgeId x, EdgeId y) const;
  std::pair<EdgeId, EdgeId> swap(EdgeId x, EdgeId y) const;

  bool truncated() const { return !boundary_.empty(); }
  bool is_boundary(VertexId v) const { return boundary_flag_[v]; }
  const std::vector<VertexId>& boundary() const { return boundary_; }

 private:
  int rank_ = 1;
  std::vector<std::string> vertices_;
  std::map<std::string, VertexId, std::less<>> vertex_index_;
  std::vector<Edge> edges_;
  std::map<std::string, EdgeId, std::less<>> edge_index_;
  std::vector<std::vector<std::vector<EdgeId>>> into_, out_;
  std::vector<Square> squares_;
  std::multimap<std::pair<EdgeId, EdgeId>, std::pair<EdgeId, EdgeId>> forward_, backward_;
  std::vector<VertexId> boundary_;
  std::vector<bool> boundary_flag_;
};

class KGraph::Builder {
 public:
  explicit Builder(int rank);
  VertexId add_vertex(const std::string& name);
  void add_edge(int color, const std::string& name, const std::string& range, const std::string& source);
  void add_square(const std::string& e, const std::string& f, const std::string& fhat, const std::string& ehat);
  /// Marks a vertex whose local structure is cut off by a finite truncation.
  void mark_boundary(const std::string& v);
  /// Throws LoadError when the square table is incomplete or not a bijection.
  KGraph build() const;
  /// Skips the completeness and bijectivity checks on the square table.
  KGraph build_unchecked() const;

 private:
  struct RawEdge {
    int color;
    std::string name, range, source;
  };
  int rank_;
  std::vector<std::string> vertices_;
  std::vector<RawEdge> edges_;
  std::vector<std::array<std::string, 4>> squares_;
  std::vector<std::string> boundary_;
};

KGraph load_kgraph(std::string_view text);
KGraph load_kgraph_file(const std::string& path);
std::string serialize_kgraph(const KGraph& g);

struct FactorizationReport {
  bool ok = true;
  int depth = 0;
  std::size_t words_checked = 0;
  std::size_t classes = 0;
  std::vector<std::string> witnesses;
};

/// Checks that every composable edge word of total length <= depth + 1 has exactly one
/// representative per color pattern in its square-rewriting class.
FactorizationReport validate_factorization(const KGraph& g, int depth);

struct StructuralFlags {
  bool finite = true;
  bool row_finite = true;
  bool source_free = true;
  bool sink_free = true;
  bool truncated = false;
  std::vector<std::string> sources;  // "vertex/color" with v Lambda^{e_i} empty
  std::vector<std::string> sinks;    // "vertex/color" with Lambda^{e_i} v empty
};

StructuralFlags structural_flags(const KGraph& g);

/// A(v, w) = number of edges of the color with range v and source w.
IntMatrix adjacency_matrix(const KGraph& g, int color);

}  // namespace kg
