#pragma once

#include "kgraph/measures.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kg {

using AtomId = std::uint32_t;

enum class SbfsKind { standard, abstract };

class SbfsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lambda-semibranching function system on a finite set of positive-weight atoms.
/// Prefixing maps tau_e are stored per edge; coding maps tau^{e_i} per color. A missing image means
/// the point lies outside the finite carrier (a truncation effect), never that it is undefined.
class Sbfs {
 public:
  std::shared_ptr<const KGraph> graph;
  SbfsKind kind = SbfsKind::abstract;
  std::vector<std::string> names;
  std::vector<Rational> weights;
  /// Atom x lies in D_{home[x]}.
  std::vector<VertexId> home;
  /// prefix_map[e][x] = tau_e(x), for x in D_{s(e)}.
  std::vector<std::vector<std::optional<AtomId>>> prefix_map;
  /// coding_map[i][x] = tau^{e_i}(x).
  std::vector<std::vector<std::optional<AtomId>>> coding_map;
  /// Standard systems only: atom labels in Lambda^infinity and the measure they came from.
  std::vector<InfPath> labels;
  std::optional<AtomicMeasure> measure;
  int truncation = 0;
  bool restricted = false;

  std::size_t size() const { return names.size(); }
  const KGraph& g() const { return *graph; }
  bool in_domain(VertexId v, AtomId x) const { return home[x] == v; }
  /// tau_lambda(y) for y in D_{s(lambda)}.
  std::optional<AtomId> prefix(const FinPath& lambda, AtomId y) const;
  /// tau^n(x), colors applied in increasing order.
  std::optional<AtomId> code(const Degree& n, AtomId x) const;
  /// Same, colors applied in decreasing order.
  std::optional<AtomId> code_reversed(const Degree& n, AtomId x) const;
  /// The unique lambda of degree n with x in R_lambda, if the coding stays in the carrier.
  std::optional<FinPath> coding_path(AtomId x, const Degree& n) const;
  bool in_range(const FinPath& lambda, AtomId x) const;
  std::optional<AtomId> find(const std::string& name) const;
  /// Weight of tau_lambda(y), looked up in the measure if the image left the carrier.
  std::optional<Rational> image_weight(const FinPath& lambda, AtomId y) const;
  Rational domain_mass(VertexId v) const;
};

/// Standard system on the truncated atomic support of mu. Throws SbfsError if some vertex
/// cylinder carries no atom or a prefix image has zero weight.
Sbfs standard_sbfs(std::shared_ptr<const KGraph> g, const AtomicMeasure& mu, int truncation);

struct AbstractSpec {
  std::vector<std::string> atoms;
  std::map<std::string, Rational> weights;
  std::map<std::string, std::string> domain;                      // atom -> vertex
  std::map<std::string, std::map<std::string, std::string>> maps;  // edge -> (x -> tau_e(x))
  std::map<int, std::map<std::string, std::string>> coding;       // optional explicit coding maps
};

/// Null atoms are dropped after checking that no positive atom maps onto them.
Sbfs abstract_sbfs(std::shared_ptr<const KGraph> g, const AbstractSpec& spec);

struct SbfsFailure {
  char condition;  // 'a'..'d'
  std::string message;
};

struct SbfsReport {
  bool passed = true;
  std::map<char, bool> conditions{{'a', true}, {'b', true}, {'c', true}, {'d', true}};
  std::vector<SbfsFailure> failures;
  std::size_t interior_atoms = 0;
  int n_max = 0;
};

/// Atoms whose prefix images and coding images up to degree (depth,...,depth) stay in the carrier.
std::vector<bool> interior_atoms(const Sbfs& s, int depth);
SbfsReport validate_sbfs(const Sbfs& s, int n_max);

/// Phi_lambda(y) = mu(tau_lambda y) / mu(y) for y in D_{s(lambda)}.
std::vector<std::pair<AtomId, Rational>> rn_derivative(const Sbfs& s, const FinPath& lambda);

/// Functions f_lambda on the carrier; the standard choice is Phi_lambda(tau^{d(lambda)} x)^{-1/2} on R_lambda.
class ProjectiveSystem {
 public:
  explicit ProjectiveSystem(std::shared_ptr<const Sbfs> s) : sbfs_(std::move(s)) {}
  const Sbfs& sbfs() const { return *sbfs_; }
  std::shared_ptr<const Sbfs> sbfs_ptr() const { return sbfs_; }
  Scalar value(const FinPath& lambda, AtomId x) const;
  void override_value(const FinPath& lambda, AtomId x, const Scalar& v) { overrides_[{lambda, x}] = v; }

 private:
  std::shared_ptr<const Sbfs> sbfs_;
  std::map<std::pair<FinPath, AtomId>, Scalar> overrides_;
};

ProjectiveSystem standard_projective(std::shared_ptr<const Sbfs> s);

struct ProjectiveReport {
  bool passed = true;
  bool condition_a = true;
  bool condition_b = true;
  std::vector<std::string> failures;
  bool exact = true;
};

ProjectiveReport validate_projective(const ProjectiveSystem& p, int n_max, double tol = 1e-9);

struct PhiResult {
  std::vector<std::optional<InfPath>> phi;
  bool all_determined = true;
  bool injective = true;
  std::vector<std::pair<AtomId, AtomId>> collisions;
};

/// phi(y) = (delta_0 delta_1 ...) where tau^{n(1,...,1)} y lies in R_{delta_n}.
PhiResult encode_phi(const Sbfs& s);

/// Restriction to an invariant set of atoms. With require_vertex_mass, every D_v must keep mass.
Sbfs restrict_sbfs(const Sbfs& s, const std::vector<AtomId>& keep, bool require_vertex_mass = true);

/// Connected pieces of the carrier under the coding maps (joint ergodicity of the tau^n).
std::vector<std::vector<AtomId>> coding_components(const Sbfs& s);

}  // namespace kg
