#include "kgraph/measures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace kg {

EigenSystem eigen_measure(const KGraph& g, std::vector<Rational> xi, std::vector<Rational> beta) {
  if (xi.size() != g.vertex_count())
    throw MeasureError("xi has " + std::to_string(xi.size()) + " entries but the graph has " +
                       std::to_string(g.vertex_count()) + " vertices");
  if (beta.size() != static_cast<std::size_t>(g.rank()))
    throw MeasureError("beta has " + std::to_string(beta.size()) + " entries but the rank is " +
                       std::to_string(g.rank()));
  for (std::size_t i = 0; i < beta.size(); ++i)
    if (sgn(beta[i]) <= 0) throw MeasureError("beta_" + std::to_string(i + 1) + " must be positive");
  for (VertexId v = 0; v < xi.size(); ++v)
    if (sgn(xi[v]) <= 0) throw MeasureError("xi at " + g.vertex_name(v) + " must be positive");
  for (int c = 0; c < g.rank(); ++c)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (g.is_boundary(v)) continue;
      Rational lhs = 0;
      for (EdgeId e : g.edges_into(v, c)) lhs += xi[g.edge(e).source];
      Rational rhs = beta[c] * xi[v];
      if (lhs != rhs)
        throw MeasureError("A_" + std::to_string(c + 1) + " xi != beta_" + std::to_string(c + 1) + " xi at row " +
                           g.vertex_name(v) + ": " + to_string(lhs) + " vs " + to_string(rhs));
    }
  EigenSystem sys{std::move(beta), std::move(xi), {}};
  for (const auto& b : sys.beta) {
    std::vector<Rational> row{Rational(1)};
    for (int j = 1; j <= 32; ++j) row.push_back(row.back() / b);
    sys.inverse_powers.push_back(std::move(row));
  }
  return sys;
}

PerronResult perron_eigenvector(const KGraph& g, double tol, int max_iterations) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<Eigen::MatrixXd> a;
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
  for (int c = 0; c < g.rank(); ++c) {
    a.push_back(adjacency_matrix(g, c).cast<double>());
    b += a.back();
  }
  PerronResult res;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
    Eigen::VectorXd y = b * x;
    y /= y.sum();
    double delta = (y - x).cwiseAbs().maxCoeff();
    x = y;
    if (delta < tol) break;
  }
  res.xi = x;
  res.residual = 0.0;
  for (const auto& m : a) {
    Eigen::VectorXd ax = m * x;
    double beta = ax.sum() / x.sum();
    res.beta.push_back(beta);
    res.residual = std::max(res.residual, (ax - beta * x).cwiseAbs().maxCoeff());
  }
  res.strictly_positive = x.minCoeff() > 1e-9 * x.maxCoeff();
  return res;
}

InfPath family_member(const KGraph& g, const GeometricFamily& f, int n) {
  return make_inf_path(g, compose(g, power(g, f.stem, n), f.body), f.cycle);
}

namespace {

InfPath stem_limit(const KGraph& g, const GeometricFamily& f) {
  return make_inf_path(g, FinPath::vertex(g, f.stem.range()), f.stem);
}

int tail_start(const KGraph& g, const GeometricFamily& f, const Degree& d) {
  int n = 0;
  for (int i = 0; i < g.rank(); ++i) {
    int s = f.stem.degree()[i];
    n = std::max(n, (d[i] + s - 1) / s);
  }
  return n;
}

}  // namespace

std::optional<int> AtomicMeasure::member_index(const KGraph& g, const GeometricFamily& f, const InfPath& x) const {
  InfPath y = family_member(g, f, 0);
  if (x == stem_limit(g, f)) return std::nullopt;
  std::set<InfPath> seen;
  InfPath cur = x;
  for (int n = 0;; ++n) {
    if (cur == y) return n;
    if (!in_cylinder(g, cur, f.stem)) return std::nullopt;
    if (!seen.insert(cur).second) return std::nullopt;
    cur = shift(g, cur, f.stem.degree());
  }
}

Rational AtomicMeasure::total_mass() const {
  Rational t = 0;
  for (const auto& [x, w] : atoms_) t += w;
  for (const auto& f : families_) t += f.first / (Rational(1) - f.ratio);
  return t;
}

Rational AtomicMeasure::point_weight(const KGraph& g, const InfPath& x) const {
  Rational w = 0;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const auto& a, const InfPath& b) { return a.first < b; });
  if (it != atoms_.end() && it->first == x) w += it->second;
  for (const auto& f : families_)
    if (auto n = member_index(g, f, x)) w += f.first * pow(f.ratio, *n);
  return w;
}

Rational AtomicMeasure::mass(const KGraph& g, const FinPath& lambda) const {
  Rational m = 0;
  for (const auto& [x, w] : atoms_)
    if (in_cylinder(g, x, lambda)) m += w;
  for (const auto& f : families_) {
    int top = tail_start(g, f, lambda.degree());
    Rational wn = f.first;
    for (int n = 0; n < top; ++n) {
      if (in_cylinder(g, family_member(g, f, n), lambda)) m += wn;
      wn *= f.ratio;
    }
    if (in_cylinder(g, stem_limit(g, f), lambda)) m += wn / (Rational(1) - f.ratio);
  }
  return m;
}

std::vector<std::pair<InfPath, Rational>> AtomicMeasure::truncated_support(const KGraph& g, int n_max) const {
  std::map<InfPath, Rational> acc;
  for (const auto& [x, w] : atoms_) acc[x] += w;
  for (const auto& f : families_) {
    Rational wn = f.first;
    for (int n = 0; n <= n_max; ++n) {
      acc[family_member(g, f, n)] += wn;
      wn *= f.ratio;
    }
  }
  std::vector<std::pair<InfPath, Rational>> out;
  for (auto& [x, w] : acc)
    if (sgn(w) > 0) out.emplace_back(x, w);
  return out;
}

AtomicMeasure atomic_measure(const KGraph& g, std::vector<std::pair<InfPath, Rational>> atoms,
                             std::vector<GeometricFamily> families) {
  AtomicMeasure mu;
  std::map<InfPath, Rational> acc;
  for (auto& [x, w] : atoms) {
    if (sgn(w) < 0) throw MeasureError("negative weight at " + render(g, x));
    acc[x] += w;
  }
  for (auto& [x, w] : acc)
    if (sgn(w) > 0) mu.atoms_.emplace_back(x, w);
  const Degree one = Degree::diagonal(static_cast<std::size_t>(g.rank()), 1);
  for (auto& f : families) {
    if (!(sgn(f.ratio) > 0 && f.ratio < 1)) throw MeasureError("family ratio must lie in (0, 1)");
    if (sgn(f.first) <= 0) throw MeasureError("family weight must be positive");
    if (f.stem.range() != f.stem.source()) throw MeasureError("family stem " + render(g, f.stem) + " is not a cycle");
    if (!(one <= f.stem.degree())) throw MeasureError("family stem must have degree >= (1,...,1)");
    if (f.body.range() != f.stem.source() || f.body.source() != f.cycle.range())
      throw MeasureError("family pattern is not composable");
    InfPath y = make_inf_path(g, f.body, f.cycle);
    if (y == stem_limit(g, f)) throw MeasureError("family members coincide with the stem limit");
    mu.families_.push_back(std::move(f));
  }
  return mu;
}

Rational CylMeasure::mass(const KGraph& g, const FinPath& lambda) const {
  if (is_eigen()) {
    const auto& e = eigen();
    Rational m = e.xi[lambda.source()];
    for (int c = 0; c < g.rank(); ++c) {
      const auto d = static_cast<std::size_t>(lambda.degree()[c]);
      const auto& row = e.inverse_powers[static_cast<std::size_t>(c)];
      if (d == 0) continue;
      m *= d < row.size() ? row[d] : pow(e.beta[c], -lambda.degree()[c]);
    }
    return m;
  }
  return atomic().mass(g, lambda);
}

Rational cyl_mass(const KGraph& g, const CylMeasure& mu, const CylUnion& a) {
  Rational m = 0;
  for (const auto& p : a.parts()) m += mu.mass(g, p);
  return m;
}

std::vector<FinPath> random_partition(const KGraph& g, const FinPath& lambda, int steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FinPath> parts{lambda};
  for (int s = 0; s < steps; ++s) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng);
    auto c = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, g.rank() - 1)(rng));
    auto kids = enumerate_paths(g, parts[i].source(), Degree::unit(static_cast<std::size_t>(g.rank()), c));
    if (kids.empty()) continue;
    FinPath p = parts[i];
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
    for (const auto& k : kids) parts.push_back(compose(g, p, k));
  }
  std::sort(parts.begin(), parts.end());
  return parts;
}

namespace {

bool touches_boundary(const KGraph& g, const std::vector<FinPath>& parts) {
  if (!g.truncated()) return false;
  for (const auto& p : parts)
    if (g.is_boundary(p.source()) || g.is_boundary(p.range())) return true;
  for (const auto& p : parts) {
    bool hit = false;
    for_each_degree(p.degree(), [&](const Degree& m) {
      if (!hit && g.is_boundary(vertex_at(g, p, m))) hit = true;
    });
    if (hit) return true;
  }
  return false;
}

}  // namespace

AdditivityReport check_additivity(const KGraph& g, const CylMeasure& mu, const FinPath& lambda, const Degree& m,
                                  int random_partitions, std::uint64_t seed) {
  AdditivityReport rep;
  rep.lhs = mu.mass(g, lambda);
  std::vector<FinPath> parts;
  for (const auto& gamma : enumerate_paths(g, lambda.source(), m)) parts.push_back(compose(g, lambda, gamma));
  rep.rhs = 0;
  for (const auto& p : parts) rep.rhs += mu.mass(g, p);
  auto fail = [&](const std::vector<FinPath>& ps, const std::string& what) {
    rep.holds = false;
    if (touches_boundary(g, ps)) {
      rep.truncation_limited = true;
    } else if (rep.witness.empty()) {
      rep.witness = what;
    }
  };
  if (rep.lhs != rep.rhs) fail(parts, "refinement by degree " + m.str() + " of " + render(g, lambda));
  for (int r = 0; r < random_partitions; ++r) {
    auto ps = random_partition(g, lambda, 6, seed + static_cast<std::uint64_t>(r));
    Rational s = 0;
    for (const auto& p : ps) s += mu.mass(g, p);
    ++rep.partitions_checked;
    if (s != rep.lhs) fail(ps, "random partition " + std::to_string(r) + " of " + render(g, lambda));
  }
  if (!rep.witness.empty()) rep.truncation_limited = false;
  return rep;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), count_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --count_;
  return true;
}

ErgodicDecomposition invariant_components(const KGraph& g, const std::vector<InfPath>& atoms) {
  ErgodicDecomposition dec;
  std::map<InfPath, std::size_t> index;
  std::vector<std::vector<InfPath>> tails;
  auto id = [&](const InfPath& x) { return index.emplace(x, index.size()).first->second; };
  for (const auto& x : atoms) {
    id(x);
    tails.push_back(tail_set(g, x));
    for (const auto& y : tails.back()) id(y);
  }
  DisjointSets ds(index.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (const auto& y : tails[i]) ds.unite(index.at(atoms[i]), index.at(y));
  std::map<std::size_t, std::vector<InfPath>> groups;
  for (const auto& x : atoms) groups[ds.find(index.at(x))].push_back(x);
  for (auto& [root, comp] : groups) {
    std::sort(comp.begin(), comp.end());
    comp.erase(std::unique(comp.begin(), comp.end()), comp.end());
    dec.components.push_back(std::move(comp));
  }
  std::sort(dec.components.begin(), dec.components.end());
  dec.closure_size = index.size();
  dec.jointly_ergodic = dec.components.size() == 1;
  return dec;
}

ErgodicDecomposition invariant_components(const KGraph& g, const AtomicMeasure& mu, int truncation) {
  std::vector<InfPath> atoms;
  for (const auto& [x, w] : mu.truncated_support(g, truncation)) atoms.push_back(x);
  auto dec = invariant_components(g, atoms);
  dec.truncation = mu.families().empty() ? 0 : truncation;
  return dec;
}

std::vector<std::vector<InfPath>> minimal_invariant_sets(const KGraph& g, const AtomicMeasure& mu, int truncation) {
  auto dec = invariant_components(g, mu, truncation);
  for (const auto& comp : dec.components)
    if (invariant_components(g, comp).components.size() != 1)
      throw std::logic_error("invariant component containing " + render(g, comp.front()) + " is not minimal");
  return dec.components;
}

SingularityReport mutually_singular(const KGraph& g, const AtomicMeasure& a, const AtomicMeasure& b, int truncation) {
  SingularityReport rep;
  rep.truncation = truncation;
  for (auto [p, q] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
    for (const auto& [x, w] : p->truncated_support(g, truncation))
      if (sgn(q->point_weight(g, x)) > 0) {
        rep.mutually_singular = false;
        rep.shared_atom = x;
        return rep;
      }
  }
  return rep;
}

}  // namespace kg
