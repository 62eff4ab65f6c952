#pragma once

#include "kgraph/sbfs.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kg {

inline double to_double(double v) { return v; }
inline double to_double(const Scalar& v) { return v.value(); }
inline double conj(double v) { return v; }
inline Scalar conj(const Scalar& v) { return v.conj(); }

/// Square sparse operator in the weight-normalized atom basis u_x = delta_x / sqrt(mu(x)).
template <class S>
class SparseOperator {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  explicit SparseOperator(std::size_t n = 0) : n_(n) {}
  std::size_t dim() const { return n_; }
  const std::map<Key, S>& entries() const { return entries_; }

  void add(std::size_t i, std::size_t j, const S& v) {
    auto [it, fresh] = entries_.emplace(Key{i, j}, v);
    if (!fresh) it->second = it->second + v;
  }
  S get(std::size_t i, std::size_t j) const {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? S{} : it->second;
  }

  SparseOperator adjoint() const {
    SparseOperator r(n_);
    for (const auto& [k, v] : entries_) r.entries_.emplace(Key{k.second, k.first}, conj(v));
    return r;
  }

  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    std::map<std::size_t, std::vector<std::pair<std::size_t, S>>> rows;
    for (const auto& [k, v] : b.entries_) rows[k.first].emplace_back(k.second, v);
    SparseOperator r(a.n_);
    for (const auto& [k, v] : a.entries_) {
      auto it = rows.find(k.second);
      if (it == rows.end()) continue;
      for (const auto& [j, w] : it->second) r.add(k.first, j, v * w);
    }
    return r;
  }
  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    SparseOperator r = a;
    for (const auto& [k, v] : b.entries_) r.add(k.first, k.second, v);
    return r;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& [k, v] : entries_)
      m(static_cast<Eigen::Index>(k.first), static_cast<Eigen::Index>(k.second)) += to_double(v);
    return m;
  }

 private:
  std::size_t n_;
  std::map<Key, S> entries_;
};

using Operator = SparseOperator<Scalar>;

/// Finite basis of carrier atoms; relations are only compared on interior atoms.
struct Frame {
  std::shared_ptr<const ProjectiveSystem> system;
  std::vector<bool> interior;
  int depth = 0;

  const Sbfs& sbfs() const { return system->sbfs(); }
  const KGraph& g() const { return system->sbfs().g(); }
  std::size_t size() const { return interior.size(); }
  bool fully_interior() const;
  std::size_t interior_count() const;
};

/// Interior is taken at depth 2 n_max so that products of two generators stay inside.
Frame make_frame(std::shared_ptr<const ProjectiveSystem> p, int n_max);
Operator build_operator(const Frame& f, const FinPath& lambda);
/// (row, col, value) lines.
std::string dump_operator(const Frame& f, const Operator& t);

struct CkFailure {
  std::string relation;
  std::string detail;
};

struct CkReport {
  bool passed = true;
  bool exact = true;
  int n_max = 0;
  std::map<std::string, std::size_t> checks;
  std::map<std::string, std::size_t> failures_by_relation;
  std::vector<CkFailure> failures;
  std::size_t interior_atoms = 0;
};

/// CK1-CK4 and the relation t_lambda^* t_eta = sum over Lambda^min of t_alpha t_beta^*.
CkReport ck_check(const Frame& f, int n_max, double tol = 1e-9);

/// sum over parts of T_lambda T_lambda^*.
Operator pvm(const Frame& f, const CylUnion& a);
/// Diagonal projection onto the atoms lying in the union.
Operator range_projection(const Frame& f, const CylUnion& a);

struct IntertwinerResult {
  int dim = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  bool fully_interior = true;
  bool all_diagonal = true;
  std::vector<Eigen::MatrixXd> basis;
};

/// Solutions W of W T^a = T^b W and W (T^a)^* = (T^b)^* W over generators of degree <= n_max.
/// Equations that reference an atom outside a truncated carrier are left out.
IntertwinerResult intertwiner_space(const Frame& a, const Frame& b, int n_max, double tol = 1e-9);
IntertwinerResult commutant(const Frame& f, int n_max, double tol = 1e-9);

struct MonicityReport {
  bool monic = false;
  bool phi_injective = false;
  bool phi_determined = true;
  std::vector<std::pair<std::string, std::string>> collisions;
  std::optional<std::string> unique_path_vertex;
  std::vector<std::string> cycles_without_entrance;
  std::vector<double> monic_vector;
  int span_depth = 0;
  int span_rank = 0;
  bool span_full_rank = false;
  bool inconsistent = false;
};

MonicityReport monicity_check(const Frame& f);

struct IrreducibilityReport {
  std::string verdict = "inconclusive";
  bool inconsistent = false;
  std::vector<std::string> evidence;
  bool cofinal = true;
  bool cofinality_applicable = false;
  bool meets_every_domain = true;
  std::vector<std::vector<std::string>> components;
  bool jointly_ergodic = false;
  bool monic = false;
  std::string periodic_screen = "not applicable";
  std::vector<std::string> character;
  int commutant_dim = 0;
  bool commutant_fully_interior = true;
  std::optional<bool> commutant_diagonal;
  std::size_t phi_components = 0;
  int truncation = 0;
};

IrreducibilityReport irreducibility_check(const Frame& f, int n_max, double tol = 1e-9);

struct DisjointnessReport {
  bool mutually_singular = true;
  std::optional<std::string> shared_atom;
  std::string direction;
  std::optional<bool> disjoint;
  int intertwiner_dim = 0;
  bool fully_interior = true;
  bool inconsistent = false;
};

DisjointnessReport disjointness_check(const Frame& a, const Frame& b, int n_max, double tol = 1e-9);

struct AtomicClassification {
  std::vector<std::pair<InfPath, std::vector<AtomId>>> fibers;
  std::size_t orbit_classes = 0;
  bool monic = false;
  bool consistent = true;
};

AtomicClassification purely_atomic_classify(const Frame& f);

struct Skeleton {
  std::shared_ptr<const KGraph> graph;  // the 1-graph Lambda_A
  Degree step;
  std::vector<FinPath> edge_paths;      // edge of Lambda_A -> path of degree `step` in Lambda
  bool adjacency_matches = false;       // A(Lambda_A) = A_1^{j1} ... A_k^{jk}
};

Skeleton skeleton(const KGraph& g, const Degree& step);
FinPath path_functor(const KGraph& g, const Skeleton& sk, const FinPath& path_in_skeleton);
/// x in Lambda^infinity read off along the diagonal multiples of the step.
InfPath skeleton_preimage(const KGraph& g, const Skeleton& sk, const InfPath& x);

struct TransferReport {
  std::size_t skeleton_components = 0;
  std::size_t graph_components = 0;
  bool implication_holds = true;
};

/// Joint ergodicity of a finite atomic support, computed in the skeleton and in the k-graph.
TransferReport transfer(const KGraph& g, const Skeleton& sk, const std::vector<InfPath>& atoms);

}  // namespace kg
