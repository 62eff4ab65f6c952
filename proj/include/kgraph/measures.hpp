#pragma once

#include "kgraph/infpaths.hpp"
#include "kgraph/numeric.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kg {

/// mu(Z(lambda)) = beta^{-d(lambda)} xi_{s(lambda)}.
struct EigenSystem {
  std::vector<Rational> beta;  // one per color
  std::vector<Rational> xi;    // one per vertex
  /// inverse_powers[i][j] = beta_i^{-j} for small j.
  std::vector<std::vector<Rational>> inverse_powers;
};

class MeasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks A_i xi = beta_i xi on every non-boundary vertex; throws MeasureError naming the row.
EigenSystem eigen_measure(const KGraph& g, std::vector<Rational> xi, std::vector<Rational> beta);

struct PerronResult {
  Eigen::VectorXd xi;
  std::vector<double> beta;
  double residual = 0.0;
  int iterations = 0;
  bool strictly_positive = true;
};

/// Common Perron eigenvector of the adjacency matrices by power iteration on I + sum A_i.
PerronResult perron_eigenvector(const KGraph& g, double tol = 1e-12, int max_iterations = 100000);

/// Atoms stem^n body cycle^infinity with weight first * ratio^n, n >= 0.
struct GeometricFamily {
  FinPath stem;
  FinPath body;
  FinPath cycle;
  Rational ratio;
  Rational first;
};

InfPath family_member(const KGraph& g, const GeometricFamily& f, int n);

class AtomicMeasure {
 public:
  const std::vector<std::pair<InfPath, Rational>>& atoms() const { return atoms_; }
  const std::vector<GeometricFamily>& families() const { return families_; }
  Rational total_mass() const;
  Rational point_weight(const KGraph& g, const InfPath& x) const;
  /// Exact mass of Z(lambda); the family tails are summed in closed form.
  Rational mass(const KGraph& g, const FinPath& lambda) const;
  /// Explicit atoms and family members with n <= n_max, sorted, weights merged.
  std::vector<std::pair<InfPath, Rational>> truncated_support(const KGraph& g, int n_max) const;

 private:
  friend AtomicMeasure atomic_measure(const KGraph&, std::vector<std::pair<InfPath, Rational>>,
                                      std::vector<GeometricFamily>);
  std::optional<int> member_index(const KGraph& g, const GeometricFamily& f, const InfPath& x) const;
  std::vector<std::pair<InfPath, Rational>> atoms_;
  std::vector<GeometricFamily> families_;
};

/// Weights must be non-negative and families need 0 < ratio < 1, d(stem) >= (1,...,1),
/// body cycle^infinity != stem^infinity.
AtomicMeasure atomic_measure(const KGraph& g, std::vector<std::pair<InfPath, Rational>> atoms,
                             std::vector<GeometricFamily> families = {});

class CylMeasure {
 public:
  CylMeasure(EigenSystem e) : m_(std::move(e)) {}    // NOLINT
  CylMeasure(AtomicMeasure a) : m_(std::move(a)) {}  // NOLINT
  bool is_eigen() const { return std::holds_alternative<EigenSystem>(m_); }
  const EigenSystem& eigen() const { return std::get<EigenSystem>(m_); }
  const AtomicMeasure& atomic() const { return std::get<AtomicMeasure>(m_); }
  Rational mass(const KGraph& g, const FinPath& lambda) const;

 private:
  std::variant<EigenSystem, AtomicMeasure> m_;
};

Rational cyl_mass(const KGraph& g, const CylMeasure& mu, const CylUnion& a);

struct AdditivityReport {
  bool holds = true;
  /// The identity failed only where the refinement meets a truncation boundary.
  bool truncation_limited = false;
  Rational lhs, rhs;
  int partitions_checked = 0;
  std::string witness;
};

/// mu(Z(lambda)) = sum over gamma in s(lambda) Lambda^m of mu(Z(lambda gamma)), plus
/// `random_partitions` random finite partitions of Z(lambda).
AdditivityReport check_additivity(const KGraph& g, const CylMeasure& mu, const FinPath& lambda, const Degree& m,
                                  int random_partitions = 0, std::uint64_t seed = 1);

/// Random partition of Z(lambda) built by `steps` random one-edge refinements.
std::vector<FinPath> random_partition(const KGraph& g, const FinPath& lambda, int steps, std::uint64_t seed);

struct ErgodicDecomposition {
  std::vector<std::vector<InfPath>> components;  // positive-weight atoms, each component sorted
  std::size_t closure_size = 0;
  bool jointly_ergodic = false;
  int truncation = 0;
};

/// Minimal invariant pieces of the atomic support: atoms are linked to every point of their tail set.
ErgodicDecomposition invariant_components(const KGraph& g, const AtomicMeasure& mu, int truncation);
/// Same, for an explicit finite list of atoms.
ErgodicDecomposition invariant_components(const KGraph& g, const std::vector<InfPath>& atoms);
/// Components re-checked one by one; throws std::logic_error if one of them splits.
std::vector<std::vector<InfPath>> minimal_invariant_sets(const KGraph& g, const AtomicMeasure& mu, int truncation);

struct SingularityReport {
  bool mutually_singular = true;
  std::optional<InfPath> shared_atom;
  int truncation = 0;
};

SingularityReport mutually_singular(const KGraph& g, const AtomicMeasure& a, const AtomicMeasure& b, int truncation);

/// Union-find over dense indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t count() const { return count_; }

 private:
  std::vector<std::size_t> parent_, rank_;
  std::size_t count_;
};

}  // namespace kg
