#include "kgraph/rep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <set>
#include <sstream>

namespace kg {

namespace {

Degree diag(const KGraph& g, int n) { return Degree::diagonal(static_cast<std::size_t>(g.rank()), n); }

class OperatorCache {
 public:
  explicit OperatorCache(const Frame& f) : f_(f) {}
  const Operator& get(const FinPath& lambda) {
    auto it = cache_.find(lambda);
    if (it == cache_.end()) it = cache_.emplace(lambda, build_operator(f_, lambda)).first;
    return it->second;
  }
  const Operator& adj(const FinPath& lambda) {
    auto it = adj_.find(lambda);
    if (it == adj_.end()) it = adj_.emplace(lambda, get(lambda).adjoint()).first;
    return it->second;
  }

 private:
  const Frame& f_;
  std::map<FinPath, Operator> cache_, adj_;
};

// x in R_lambda: the preimage tau^{d(lambda)}(x). Outer nullopt: cannot tell inside the carrier.
std::optional<std::optional<AtomId>> range_preimage(const Sbfs& s, const FinPath& lambda, AtomId x) {
  if (s.home[x] != lambda.range()) return std::optional<AtomId>{};
  auto y = s.code(lambda.degree(), x);
  if (!y) return std::nullopt;
  if (s.home[*y] != lambda.source() || s.prefix(lambda, *y) != x) return std::optional<AtomId>{};
  return std::optional<AtomId>{*y};
}

double entry_value(const Frame& f, const FinPath& lambda, AtomId x, AtomId y) {
  const Sbfs& s = f.sbfs();
  Scalar v = f.system->value(lambda, x) * Scalar(Surd::sqrt(s.weights[x] / s.weights[y]));
  return v.value();
}

}  // namespace

bool Frame::fully_interior() const { return std::all_of(interior.begin(), interior.end(), [](bool b) { return b; }); }

std::size_t Frame::interior_count() const {
  return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), true));
}

Frame make_frame(std::shared_ptr<const ProjectiveSystem> p, int n_max) {
  Frame f;
  f.system = std::move(p);
  f.depth = 2 * n_max;
  f.interior = interior_atoms(f.system->sbfs(), f.depth);
  return f;
}

Operator build_operator(const Frame& f, const FinPath& lambda) {
  const Sbfs& s = f.sbfs();
  Operator t(s.size());
  for (AtomId x = 0; x < s.size(); ++x) {
    if (!s.in_range(lambda, x)) continue;
    AtomId y = *s.code(lambda.degree(), x);
    t.add(x, y, f.system->value(lambda, x) * Scalar(Surd::sqrt(s.weights[x] / s.weights[y])));
  }
  return t;
}

std::string dump_operator(const Frame& f, const Operator& t) {
  std::ostringstream out;
  for (const auto& [k, v] : t.entries())
    out << f.sbfs().names[k.first] << " " << f.sbfs().names[k.second] << " " << v.str() << "\n";
  return out.str();
}

CkReport ck_check(const Frame& f, int n_max, double tol) {
  const Sbfs& s = f.sbfs();
  const KGraph& g = s.g();
  CkReport rep;
  rep.n_max = n_max;
  rep.interior_atoms = f.interior_count();
  OperatorCache ops(f);
  auto compare = [&](const std::string& rel, const std::string& what, const Operator& lhs, const Operator& rhs) {
    ++rep.checks[rel];
    std::set<Operator::Key> keys;
    for (const auto& [k, v] : lhs.entries()) keys.insert(k);
    for (const auto& [k, v] : rhs.entries()) keys.insert(k);
    for (const auto& k : keys) {
      if (!f.interior[k.first] || !f.interior[k.second]) continue;
      Scalar a = lhs.get(k.first, k.second), b = rhs.get(k.first, k.second);
      if (!a.exact() || !b.exact()) rep.exact = false;
      if (!approx_equal(a, b, tol)) {
        rep.passed = false;
        ++rep.failures_by_relation[rel];
        if (rep.failures.size() < 16)
          rep.failures.push_back({rel, what + " at (" + s.names[k.first] + ", " + s.names[k.second] + "): " + a.str() +
                                           " vs " + b.str()});
        return;
      }
    }
  };
  auto paths = enumerate_paths_upto(g, diag(g, n_max));
  Operator zero(s.size());
  // CK1
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    FinPath pv = FinPath::vertex(g, v);
    const Operator& t = ops.get(pv);
    compare("CK1", "T_v^* = T_v for v = " + g.vertex_name(v), ops.adj(pv), t);
    compare("CK1", "T_v^2 = T_v for v = " + g.vertex_name(v), t * t, t);
    for (VertexId w = 0; w < g.vertex_count(); ++w)
      if (w != v)
        compare("CK1", "T_v T_w = 0 for " + g.vertex_name(v) + ", " + g.vertex_name(w), t * ops.get(FinPath::vertex(g, w)),
                zero);
  }
  // CK2 and CK3
  for (const auto& lam : paths) {
    compare("CK3", "T_lambda^* T_lambda = T_s(lambda) for " + render(g, lam), ops.adj(lam) * ops.get(lam),
            ops.get(FinPath::vertex(g, lam.source())));
    for (const auto& eta : paths) {
      if (eta.range() != lam.source()) continue;
      FinPath le = compose(g, lam, eta);
      compare("CK2", "T_lambda T_eta = T_{lambda eta} for " + render(g, lam) + ", " + render(g, eta),
              ops.get(lam) * ops.get(eta), ops.get(le));
    }
  }
  // CK4
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for_each_degree(diag(g, n_max), [&](const Degree& n) {
      Operator sum(s.size());
      for (const auto& lam : enumerate_paths(g, v, n)) sum = sum + ops.get(lam) * ops.adj(lam);
      compare("CK4", "T_v = sum T_lambda T_lambda^* for v = " + g.vertex_name(v) + ", n = " + n.str(),
              ops.get(FinPath::vertex(g, v)), sum);
    });
  // Lambda^min relation
  for (const auto& lam : paths)
    for (const auto& eta : paths) {
      if (lam.range() != eta.range()) continue;
      Operator rhs(s.size());
      for (const auto& [alpha, beta] : lambda_min(g, lam, eta)) rhs = rhs + ops.get(alpha) * ops.adj(beta);
      compare("MIN", "T_lambda^* T_eta for " + render(g, lam) + ", " + render(g, eta), ops.adj(lam) * ops.get(eta),
              rhs);
    }
  return rep;
}

Operator pvm(const Frame& f, const CylUnion& a) {
  Operator sum(f.size());
  for (const auto& lam : a.parts()) {
    Operator t = build_operator(f, lam);
    sum = sum + t * t.adjoint();
  }
  return sum;
}

Operator range_projection(const Frame& f, const CylUnion& a) {
  Operator p(f.size());
  for (AtomId x = 0; x < f.size(); ++x)
    for (const auto& lam : a.parts())
      if (f.sbfs().in_range(lam, x)) {
        p.add(x, x, Scalar(Rational(1)));
        break;
      }
  return p;
}

IntertwinerResult intertwiner_space(const Frame& fa, const Frame& fb, int n_max, double tol) {
  const Sbfs& A = fa.sbfs();
  const Sbfs& B = fb.sbfs();
  const KGraph& g = A.g();
  IntertwinerResult res;
  res.fully_interior = fa.fully_interior() && fb.fully_interior();
  // W(x, y) with x in B, y in A can only be nonzero when x and y lie in the same R_lambda for
  // every lambda of degree <= n_max, i.e. share the coding path of degree (n_max, ..., n_max).
  auto signature = [&](const Sbfs& s, AtomId x) { return s.coding_path(x, diag(g, n_max)); };
  std::map<std::pair<AtomId, AtomId>, std::size_t> unknown;
  for (AtomId x = 0; x < B.size(); ++x) {
    auto sx = signature(B, x);
    for (AtomId y = 0; y < A.size(); ++y) {
      if (B.home[x] != A.home[y]) continue;
      auto sy = signature(A, y);
      if (sx && sy && !(*sx == *sy)) continue;
      unknown.emplace(std::pair{x, y}, unknown.size());
    }
  }
  res.unknowns = unknown.size();
  const auto u = static_cast<Eigen::Index>(unknown.size());
  if (u == 0) return res;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(u, u);
  auto accumulate = [&](const std::map<std::size_t, double>& row) {
    if (row.empty()) return;
    ++res.equations;
    for (const auto& [i, a] : row)
      for (const auto& [j, b] : row)
        normal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += a * b;
  };
  auto term = [&](std::map<std::size_t, double>& row, AtomId x, AtomId y, double c) {
    auto it = unknown.find({x, y});
    if (it != unknown.end() && c != 0.0) row[it->second] += c;
  };
  auto paths = enumerate_paths_upto(g, diag(g, n_max));
  for (const auto& lam : paths) {
    for (AtomId x = 0; x < B.size(); ++x) {
      auto bx_pre = range_preimage(B, lam, x);  // row x of T^B
      std::optional<AtomId> bx_img;             // column x of T^B
      bool bx_img_known = true;
      if (B.home[x] == lam.source()) {
        bx_img = B.prefix(lam, x);
        if (!bx_img) bx_img_known = false;
      }
      for (AtomId y = 0; y < A.size(); ++y) {
        // (W T^A)(x, y) = (T^B W)(x, y)
        if (bx_pre) {
          bool ok = true;
          std::map<std::size_t, double> row;
          if (A.home[y] == lam.source()) {
            auto z = A.prefix(lam, y);
            if (!z) ok = false;
            else term(row, x, *z, entry_value(fa, lam, *z, y));
          }
          if (ok && *bx_pre) term(row, **bx_pre, y, -entry_value(fb, lam, x, **bx_pre));
          if (ok) accumulate(row);
        }
        // (W T^A*)(x, y) = (T^B* W)(x, y)
        if (bx_img_known) {
          auto ay_pre = range_preimage(A, lam, y);
          if (ay_pre) {
            std::map<std::size_t, double> row;
            if (*ay_pre) term(row, x, **ay_pre, entry_value(fa, lam, y, **ay_pre));
            if (bx_img) term(row, *bx_img, y, -entry_value(fb, lam, *bx_img, x));
            accumulate(row);
          }
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const auto& values = eig.eigenvalues();
  double top = std::max(1.0, values.cwiseAbs().maxCoeff());
  double cut = std::max(tol, 1e-10) * top;
  std::vector<std::pair<AtomId, AtomId>> cols(unknown.size());
  for (const auto& [k, i] : unknown) cols[i] = k;
  for (Eigen::Index i = 0; i < u; ++i) {
    if (values(i) > cut) continue;
    ++res.dim;
    Eigen::VectorXd v = eig.eigenvectors().col(i);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(B.size()), static_cast<Eigen::Index>(A.size()));
    for (Eigen::Index j = 0; j < u; ++j) {
      auto [x, y] = cols[static_cast<std::size_t>(j)];
      w(x, y) = v(j);
      if (std::abs(v(j)) > 1e-7 && B.names[x] != A.names[y]) res.all_diagonal = false;
    }
    res.basis.push_back(std::move(w));
  }
  return res;
}

IntertwinerResult commutant(const Frame& f, int n_max, double tol) { return intertwiner_space(f, f, n_max, tol); }

MonicityReport monicity_check(const Frame& f) {
  const Sbfs& s = f.sbfs();
  const KGraph& g = s.g();
  MonicityReport rep;
  auto phi = encode_phi(s);
  rep.phi_determined = phi.all_determined;
  rep.phi_injective = phi.injective && phi.all_determined;
  for (auto [a, b] : phi.collisions) rep.collisions.emplace_back(s.names[a], s.names[b]);
  rep.monic = rep.phi_injective;

  for (VertexId v = 0; v < g.vertex_count() && !rep.unique_path_vertex; ++v) {
    auto reach = reachable_sources(g, v);
    bool unique = true;
    for (VertexId w = 0; w < g.vertex_count() && unique; ++w)
      if (reach[w])
        for (int c = 0; c < g.rank(); ++c)
          if (g.edges_into(w, c).size() != 1) unique = false;
    auto atoms = std::count(s.home.begin(), s.home.end(), v);
    if (unique && atoms >= 2) rep.unique_path_vertex = g.vertex_name(v);
  }
  if (g.rank() == 1) {
    std::set<VertexId> reported;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::vector<VertexId> walk;
      std::set<VertexId> on;
      VertexId at = v;
      while (g.edges_into(at, 0).size() == 1 && !on.count(at)) {
        on.insert(at);
        walk.push_back(at);
        at = g.edge(g.edges_into(at, 0).front()).source;
      }
      if (!on.count(at) || reported.count(at)) continue;
      std::string cyc;
      VertexId c = at;
      do {
        reported.insert(c);
        EdgeId e = g.edges_into(c, 0).front();
        cyc += (cyc.empty() ? "" : ".") + g.edge(e).name;
        c = g.edge(e).source;
      } while (c != at);
      rep.cycles_without_entrance.push_back(cyc);
    }
  }

  // xi = sum_n chi_{D_{v_n}} / (n sqrt(mu(D_{v_n}))) in the normalized basis
  rep.monic_vector.resize(s.size());
  for (AtomId x = 0; x < s.size(); ++x) {
    Rational dm = s.domain_mass(s.home[x]);
    rep.monic_vector[x] = Surd::sqrt(s.weights[x] / dm).to_double() / static_cast<double>(s.home[x] + 1);
  }
  const int cap = static_cast<int>(s.size()) + 2;
  for (int j = 1; j <= cap; ++j) {
    std::map<FinPath, std::vector<AtomId>> cells;
    bool determined = true;
    for (AtomId x = 0; x < s.size() && determined; ++x) {
      auto p = s.coding_path(x, diag(g, j));
      if (!p) determined = false;
      else cells[*p].push_back(x);
    }
    if (!determined) break;
    Eigen::MatrixXd span = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.size()),
                                                 static_cast<Eigen::Index>(cells.size()));
    Eigen::Index col = 0;
    for (const auto& [p, xs] : cells) {
      for (AtomId x : xs) span(x, col) = rep.monic_vector[x];
      ++col;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(span);
    lu.setThreshold(1e-10);
    rep.span_depth = j;
    rep.span_rank = static_cast<int>(lu.rank());
    if (cells.size() == s.size()) break;
  }
  rep.span_full_rank = rep.span_rank == static_cast<int>(s.size());
  if (rep.monic != rep.span_full_rank) rep.inconsistent = true;
  return rep;
}

namespace {

std::string screen_periodic(const Frame& f, int n_max, double tol, std::vector<std::string>& character,
                            bool& failed) {
  const Sbfs& s = f.sbfs();
  const KGraph& g = s.g();
  failed = false;
  auto per = periodic_pairs(g, n_max);
  std::set<VertexId> hper(per.h_per.begin(), per.h_per.end());
  struct Ratio {
    std::vector<long> diff;
    int sign;
  };
  std::vector<Ratio> ratios;
  bool any = false;
  for (const auto& pp : per.pairs) {
    if (!hper.count(pp.lambda.range())) continue;
    std::optional<double> ratio;
    for (AtomId x = 0; x < s.size(); ++x) {
      if (!f.interior[x] || !s.in_range(pp.lambda, x) || !s.in_range(pp.nu, x)) continue;
      if (s.code(pp.lambda.degree(), x) != s.code(pp.nu.degree(), x)) return "not applicable";
      double a = f.system->value(pp.lambda, x).value(), b = f.system->value(pp.nu, x).value();
      if (b == 0.0) continue;
      double r = a / b;
      if (ratio && std::abs(*ratio - r) > tol) {
        failed = true;
        return "failed";
      }
      ratio = r;
    }
    if (!ratio) continue;
    any = true;
    if (std::abs(std::abs(*ratio) - 1.0) > tol) {
      failed = true;
      return "failed";
    }
    std::vector<long> diff(static_cast<std::size_t>(g.rank()));
    for (int c = 0; c < g.rank(); ++c) diff[c] = pp.lambda.degree()[c] - pp.nu.degree()[c];
    ratios.push_back({diff, *ratio > 0 ? 1 : -1});
  }
  if (!any) return "not applicable";
  // real-valued systems: look for z in {1, -1}^k
  const int k = g.rank();
  for (int mask = 0; mask < (1 << k); ++mask) {
    bool ok = true;
    for (const auto& r : ratios) {
      long odd = 0;
      for (int c = 0; c < k; ++c)
        if (mask & (1 << c)) odd += r.diff[c];
      int sign = (odd % 2 == 0) ? 1 : -1;
      if (sign != r.sign) {
        ok = false;
        break;
      }
    }
    if (ok) {
      character.clear();
      for (int c = 0; c < k; ++c) character.push_back((mask & (1 << c)) ? "1/2" : "0");
      return "passed";
    }
  }
  failed = true;
  return "failed";
}

}  // namespace

IrreducibilityReport irreducibility_check(const Frame& f, int n_max, double tol) {
  const Sbfs& s = f.sbfs();
  const KGraph& g = s.g();
  IrreducibilityReport rep;
  rep.truncation = s.truncation;
  auto decide = [&](const std::string& verdict, const std::string& why) {
    rep.evidence.push_back(why);
    if (rep.verdict == "inconclusive") rep.verdict = verdict;
    else if (rep.verdict != verdict) {
      rep.inconsistent = true;
      rep.evidence.push_back("conflicting screens");
    }
  };

  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (std::find(s.home.begin(), s.home.end(), v) == s.home.end()) rep.meets_every_domain = false;
  auto cof = is_cofinal(g);
  rep.cofinality_applicable = cof.applicable;
  rep.cofinal = cof.cofinal;
  if (cof.applicable && !cof.cofinal && rep.meets_every_domain) {
    // The orbit of the witness path is invariant and misses D_v, so it splits the carrier only when
    // the witness itself carries mass.
    bool charged = s.kind == SbfsKind::standard && cof.witness_path &&
                   std::find(s.labels.begin(), s.labels.end(), *cof.witness_path) != s.labels.end();
    if (charged)
      decide("reducible", "graph is not cofinal, the witness " + render(g, *cof.witness_path) +
                              " is an atom and every D_v has positive measure");
    else
      rep.evidence.push_back("graph is not cofinal but the witness path carries no mass; screen skipped");
  }

  auto comps = coding_components(s);
  rep.jointly_ergodic = comps.size() == 1;
  for (const auto& c : comps) {
    std::vector<std::string> names;
    for (AtomId x : c) names.push_back(s.names[x]);
    rep.components.push_back(std::move(names));
  }
  if (!rep.jointly_ergodic)
    decide("reducible", "coding maps split the carrier into " + std::to_string(comps.size()) + " invariant pieces");

  auto phi = encode_phi(s);
  rep.monic = phi.injective && phi.all_determined;
  if (phi.all_determined) {
    std::vector<InfPath> images;
    for (const auto& p : phi.phi) images.push_back(*p);
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    rep.phi_components = invariant_components(g, images).components.size();
  }
  if (phi.all_determined && !rep.monic) decide("reducible", "atomic representation that is not monic");

  if (rep.jointly_ergodic && s.kind == SbfsKind::standard && rep.verdict == "inconclusive") {
    if (!s.restricted) {
      decide("irreducible", "standard system with jointly ergodic coding maps");
    } else if (structural_flags(g).sink_free) {
      decide("irreducible", "restriction to a minimal invariant set of a sink-free graph");
    } else {
      decide("irreducible", "restriction of a purely atomic representation to one orbit");
    }
  }

  bool failed = false;
  rep.periodic_screen = screen_periodic(f, n_max, tol, rep.character, failed);
  if (failed) decide("reducible", "f_lambda / f_nu is not given by a character on Per");

  auto com = commutant(f, n_max, tol);
  rep.commutant_dim = com.dim;
  rep.commutant_fully_interior = com.fully_interior;
  if (s.kind == SbfsKind::standard) {
    rep.commutant_diagonal = com.all_diagonal;
    if (!com.all_diagonal) {
      rep.inconsistent = true;
      rep.evidence.push_back("commutant of a standard system has an off-diagonal element");
    }
  }
  rep.evidence.push_back("commutant dimension " + std::to_string(com.dim) +
                         (com.fully_interior ? "" : " (equations leaving the truncated carrier omitted)"));
  if (rep.verdict == "inconclusive" && com.fully_interior) {
    rep.verdict = com.dim == 1 ? "irreducible" : "reducible";
    rep.evidence.push_back("decided by the commutant");
  } else if ((rep.verdict == "irreducible") != (com.dim == 1) && rep.verdict != "inconclusive") {
    rep.inconsistent = true;
    rep.evidence.push_back("commutant disagrees with the verdict");
  }
  if (rep.monic && phi.all_determined && static_cast<std::size_t>(com.dim) != rep.phi_components) {
    rep.inconsistent = true;
    rep.evidence.push_back("commutant dimension differs from the number of ergodic components");
  }
  return rep;
}

DisjointnessReport disjointness_check(const Frame& a, const Frame& b, int n_max, double tol) {
  const Sbfs& A = a.sbfs();
  const Sbfs& B = b.sbfs();
  DisjointnessReport rep;
  for (AtomId x = 0; x < A.size() && !rep.shared_atom; ++x)
    if (B.find(A.names[x])) rep.shared_atom = A.names[x];
  if (A.kind == SbfsKind::standard && B.kind == SbfsKind::standard && A.measure && B.measure) {
    for (AtomId x = 0; x < A.size() && !rep.shared_atom; ++x)
      if (sgn(B.measure->point_weight(A.g(), A.labels[x])) > 0 && !B.restricted) rep.shared_atom = A.names[x];
  }
  rep.mutually_singular = !rep.shared_atom;
  auto w = intertwiner_space(a, b, n_max, tol);
  rep.intertwiner_dim = w.dim;
  rep.fully_interior = w.fully_interior;
  bool standard = A.kind == SbfsKind::standard && B.kind == SbfsKind::standard;
  if (standard) {
    rep.direction = "two-way";
    rep.disjoint = rep.mutually_singular;
    if (*rep.disjoint != (w.dim == 0)) rep.inconsistent = true;
  } else {
    rep.direction = "one-directional";
    if (w.fully_interior) rep.disjoint = w.dim == 0;
    if (rep.disjoint && *rep.disjoint && !rep.mutually_singular) rep.inconsistent = true;
  }
  return rep;
}

AtomicClassification purely_atomic_classify(const Frame& f) {
  const Sbfs& s = f.sbfs();
  AtomicClassification res;
  auto phi = encode_phi(s);
  std::map<InfPath, std::vector<AtomId>> fibers;
  for (AtomId x = 0; x < s.size(); ++x)
    if (phi.phi[x]) fibers[*phi.phi[x]].push_back(x);
  std::vector<InfPath> support;
  res.monic = phi.all_determined;
  for (auto& [gamma, xs] : fibers) {
    if (xs.size() != 1) res.monic = false;
    support.push_back(gamma);
    res.fibers.emplace_back(gamma, xs);
  }
  res.orbit_classes = support.empty() ? 0 : invariant_components(s.g(), support).components.size();
  res.consistent = res.monic == monicity_check(f).monic;
  return res;
}

Skeleton skeleton(const KGraph& g, const Degree& step) {
  Skeleton sk;
  sk.step = step;
  KGraph::Builder b(1);
  for (VertexId v = 0; v < g.vertex_count(); ++v) b.add_vertex(g.vertex_name(v));
  int n = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (const auto& p : enumerate_paths(g, v, step)) {
      b.add_edge(0, "s" + std::to_string(n++), g.vertex_name(p.range()), g.vertex_name(p.source()));
      sk.edge_paths.push_back(p);
    }
  auto built = std::make_shared<KGraph>(b.build());
  // edge ids in the built graph are sorted by name; reorder edge_paths to match
  std::vector<FinPath> ordered(sk.edge_paths.size());
  for (std::size_t i = 0; i < sk.edge_paths.size(); ++i)
    ordered[*built->find_edge("s" + std::to_string(i))] = sk.edge_paths[i];
  sk.edge_paths = std::move(ordered);
  sk.graph = built;
  IntMatrix prod = IntMatrix::Identity(static_cast<Eigen::Index>(g.vertex_count()),
                                       static_cast<Eigen::Index>(g.vertex_count()));
  for (int c = 0; c < g.rank(); ++c) {
    IntMatrix a = adjacency_matrix(g, c);
    for (int i = 0; i < step[c]; ++i) prod = prod * a;
  }
  sk.adjacency_matches = prod == adjacency_matrix(*built, 0);
  return sk;
}

FinPath path_functor(const KGraph& g, const Skeleton& sk, const FinPath& p) {
  FinPath out = FinPath::vertex(g, p.range());
  for (EdgeId e : p.edges()) out = compose(g, out, sk.edge_paths[e]);
  return out;
}

InfPath skeleton_preimage(const KGraph& g, const Skeleton& sk, const InfPath& x) {
  std::map<FinPath, EdgeId> edge_of;
  for (EdgeId e = 0; e < sk.edge_paths.size(); ++e) edge_of[sk.edge_paths[e]] = e;
  std::map<InfPath, std::size_t> seen;
  std::vector<EdgeId> word;
  InfPath cur = x;
  while (!seen.count(cur)) {
    seen[cur] = word.size();
    word.push_back(edge_of.at(window(g, cur, sk.step)));
    cur = shift(g, cur, sk.step);
  }
  std::size_t loop = seen[cur];
  const KGraph& a = *sk.graph;
  std::vector<EdgeId> head(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(loop));
  std::vector<EdgeId> tail(word.begin() + static_cast<std::ptrdiff_t>(loop), word.end());
  return make_inf_path(a, make_path_from(a, x.range(), head), make_path_from(a, cur.range(), tail));
}

TransferReport transfer(const KGraph& g, const Skeleton& sk, const std::vector<InfPath>& atoms) {
  TransferReport rep;
  std::vector<InfPath> lifted;
  for (const auto& x : atoms) lifted.push_back(skeleton_preimage(g, sk, x));
  rep.skeleton_components = invariant_components(*sk.graph, lifted).components.size();
  rep.graph_components = invariant_components(g, atoms).components.size();
  rep.implication_holds = rep.skeleton_components != 1 || rep.graph_components == 1;
  return rep;
}

}  // namespace kg
