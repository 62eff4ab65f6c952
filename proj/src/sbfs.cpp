#include "kgraph/sbfs.hpp"

#include <algorithm>
#include <set>

namespace kg {

namespace {

Degree ones(const KGraph& g) { return Degree::diagonal(static_cast<std::size_t>(g.rank()), 1); }

std::map<VertexId, std::vector<FinPath>> paths_by_source(const KGraph& g, int depth) {
  std::map<VertexId, std::vector<FinPath>> out;
  for (auto& p : enumerate_paths_upto(g, Degree::diagonal(static_cast<std::size_t>(g.rank()), depth)))
    out[p.source()].push_back(std::move(p));
  return out;
}

}  // namespace

std::optional<AtomId> Sbfs::prefix(const FinPath& lambda, AtomId y) const {
  if (home[y] != lambda.source()) return std::nullopt;
  AtomId cur = y;
  const auto& w = lambda.edges();
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    auto img = prefix_map[*it][cur];
    if (!img) return std::nullopt;
    cur = *img;
  }
  return cur;
}

std::optional<AtomId> Sbfs::code(const Degree& n, AtomId x) const {
  AtomId cur = x;
  for (int c = 0; c < g().rank(); ++c)
    for (int i = 0; i < n[c]; ++i) {
      auto nxt = coding_map[c][cur];
      if (!nxt) return std::nullopt;
      cur = *nxt;
    }
  return cur;
}

std::optional<AtomId> Sbfs::code_reversed(const Degree& n, AtomId x) const {
  AtomId cur = x;
  for (int c = g().rank() - 1; c >= 0; --c)
    for (int i = 0; i < n[c]; ++i) {
      auto nxt = coding_map[c][cur];
      if (!nxt) return std::nullopt;
      cur = *nxt;
    }
  return cur;
}

std::optional<FinPath> Sbfs::coding_path(AtomId x, const Degree& n) const {
  std::vector<EdgeId> word;
  AtomId cur = x;
  for (int c = 0; c < g().rank(); ++c)
    for (int i = 0; i < n[c]; ++i) {
      auto nxt = coding_map[c][cur];
      if (!nxt) return std::nullopt;
      std::optional<EdgeId> found;
      for (EdgeId e : g().edges_into(home[cur], c))
        if (g().edge(e).source == home[*nxt] && prefix_map[e][*nxt] == cur) {
          found = e;
          break;
        }
      if (!found) return std::nullopt;
      word.push_back(*found);
      cur = *nxt;
    }
  return make_path_from(g(), home[x], word);
}

bool Sbfs::in_range(const FinPath& lambda, AtomId x) const {
  if (home[x] != lambda.range()) return false;
  auto y = code(lambda.degree(), x);
  if (!y || home[*y] != lambda.source()) return false;
  return prefix(lambda, *y) == x;
}

std::optional<AtomId> Sbfs::find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<AtomId>(it - names.begin());
}

std::optional<Rational> Sbfs::image_weight(const FinPath& lambda, AtomId y) const {
  if (auto img = prefix(lambda, y)) return weights[*img];
  if (kind == SbfsKind::standard && measure) return measure->point_weight(g(), prefix_path(g(), lambda, labels[y]));
  return std::nullopt;
}

Rational Sbfs::domain_mass(VertexId v) const {
  Rational m = 0;
  for (AtomId x = 0; x < size(); ++x)
    if (home[x] == v) m += weights[x];
  return m;
}

Sbfs standard_sbfs(std::shared_ptr<const KGraph> gp, const AtomicMeasure& mu, int truncation) {
  const KGraph& g = *gp;
  Sbfs s;
  s.graph = gp;
  s.kind = SbfsKind::standard;
  s.measure = mu;
  s.truncation = mu.families().empty() ? 0 : truncation;
  std::map<InfPath, AtomId> index;
  for (const auto& [x, w] : mu.truncated_support(g, truncation)) {
    index[x] = static_cast<AtomId>(s.labels.size());
    s.labels.push_back(x);
    s.names.push_back(render(g, x));
    s.weights.push_back(w);
    s.home.push_back(x.range());
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (std::find(s.home.begin(), s.home.end(), v) == s.home.end())
      throw SbfsError("Z(" + g.vertex_name(v) + ") carries no atom");
  s.prefix_map.assign(g.edge_count(), std::vector<std::optional<AtomId>>(s.size()));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    FinPath pe = make_path(g, std::vector<EdgeId>{e});
    for (AtomId x = 0; x < s.size(); ++x) {
      if (s.home[x] != g.edge(e).source) continue;
      InfPath img = prefix_path(g, pe, s.labels[x]);
      auto it = index.find(img);
      if (it != index.end()) {
        s.prefix_map[e][x] = it->second;
      } else if (sgn(mu.point_weight(g, img)) == 0) {
        throw SbfsError("tau_" + g.edge(e).name + " maps " + s.names[x] + " to the null point " + render(g, img));
      }
    }
  }
  s.coding_map.assign(static_cast<std::size_t>(g.rank()), std::vector<std::optional<AtomId>>(s.size()));
  for (int c = 0; c < g.rank(); ++c) {
    Degree step = Degree::unit(static_cast<std::size_t>(g.rank()), static_cast<std::size_t>(c));
    for (AtomId x = 0; x < s.size(); ++x) {
      InfPath img = shift(g, s.labels[x], step);
      auto it = index.find(img);
      if (it != index.end()) {
        s.coding_map[c][x] = it->second;
      } else if (sgn(mu.point_weight(g, img)) == 0) {
        throw SbfsError("coding map of color " + std::to_string(c + 1) + " sends " + s.names[x] +
                        " to the null point " + render(g, img));
      }
    }
  }
  return s;
}

Sbfs abstract_sbfs(std::shared_ptr<const KGraph> gp, const AbstractSpec& spec) {
  const KGraph& g = *gp;
  std::map<std::string, std::size_t> all;
  for (const auto& a : spec.atoms) {
    if (!all.emplace(a, all.size()).second) throw SbfsError("duplicate atom '" + a + "'");
  }
  auto weight = [&](const std::string& a) {
    auto it = spec.weights.find(a);
    return it == spec.weights.end() ? Rational(1) : it->second;
  };
  std::vector<VertexId> home(spec.atoms.size());
  for (const auto& a : spec.atoms) {
    auto it = spec.domain.find(a);
    if (it == spec.domain.end()) throw SbfsError("atom '" + a + "' lies in no domain D_v");
    auto v = g.find_vertex(it->second);
    if (!v) throw SbfsError("unknown vertex '" + it->second + "'");
    home[all.at(a)] = *v;
    if (sgn(weight(a)) < 0) throw SbfsError("negative weight at '" + a + "'");
  }
  for (const auto& [w, q] : spec.weights)
    if (!all.count(w)) throw SbfsError("weight for unknown atom '" + w + "'");
  // raw maps over all atoms
  std::vector<std::vector<std::optional<std::size_t>>> raw(g.edge_count(),
                                                           std::vector<std::optional<std::size_t>>(all.size()));
  for (const auto& [ename, m] : spec.maps) {
    auto e = g.find_edge(ename);
    if (!e) throw SbfsError("unknown edge '" + ename + "'");
    for (const auto& [from, to] : m) {
      if (!all.count(from) || !all.count(to)) throw SbfsError("map " + ename + " uses an unknown atom");
      std::size_t a = all.at(from), b = all.at(to);
      if (home[a] != g.edge(*e).source)
        throw SbfsError("tau_" + ename + " applied to '" + from + "' outside D_" + g.vertex_name(g.edge(*e).source));
      if (home[b] != g.edge(*e).range)
        throw SbfsError("tau_" + ename + "('" + from + "') = '" + to + "' escapes D_" + g.vertex_name(g.edge(*e).range));
      raw[*e][a] = b;
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::set<std::size_t> images;
    for (std::size_t a = 0; a < all.size(); ++a) {
      if (home[a] != g.edge(e).source) continue;
      if (!raw[e][a]) throw SbfsError("tau_" + g.edge(e).name + " is not defined at '" + spec.atoms[a] + "'");
      if (!images.insert(*raw[e][a]).second)
        throw SbfsError("tau_" + g.edge(e).name + " is not injective at '" + spec.atoms[*raw[e][a]] + "'");
    }
  }
  for (int c = 0; c < g.rank(); ++c) {
    std::map<std::size_t, EdgeId> owner;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.color(e) != c) continue;
      for (std::size_t a = 0; a < all.size(); ++a) {
        if (!raw[e][a]) continue;
        auto [it, fresh] = owner.emplace(*raw[e][a], e);
        if (!fresh)
          throw SbfsError("ranges of " + g.edge(it->second).name + " and " + g.edge(e).name + " overlap at '" +
                          spec.atoms[*raw[e][a]] + "'");
      }
    }
  }
  // keep positive atoms; null sets must map to null sets and positive to positive
  std::vector<std::optional<AtomId>> keep(all.size());
  Sbfs s;
  s.graph = gp;
  s.kind = SbfsKind::abstract;
  for (std::size_t a = 0; a < all.size(); ++a)
    if (sgn(weight(spec.atoms[a])) > 0) {
      keep[a] = static_cast<AtomId>(s.names.size());
      s.names.push_back(spec.atoms[a]);
      s.weights.push_back(weight(spec.atoms[a]));
      s.home.push_back(home[a]);
    }
  s.prefix_map.assign(g.edge_count(), std::vector<std::optional<AtomId>>(s.size()));
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (std::size_t a = 0; a < all.size(); ++a) {
      if (!raw[e][a]) continue;
      bool pa = keep[a].has_value(), pb = keep[*raw[e][a]].has_value();
      if (pa != pb)
        throw SbfsError("tau_" + g.edge(e).name + " maps " + (pa ? "positive" : "null") + " atom '" + spec.atoms[a] +
                        "' to " + (pb ? "positive" : "null") + " atom '" + spec.atoms[*raw[e][a]] + "'");
      if (pa) s.prefix_map[e][*keep[a]] = keep[*raw[e][a]];
    }
  s.coding_map.assign(static_cast<std::size_t>(g.rank()), std::vector<std::optional<AtomId>>(s.size()));
  for (int c = 0; c < g.rank(); ++c) {
    auto explicit_map = spec.coding.find(c);
    if (explicit_map != spec.coding.end()) {
      for (const auto& [from, to] : explicit_map->second) {
        if (!all.count(from) || !all.count(to)) throw SbfsError("coding map uses an unknown atom");
        auto a = keep[all.at(from)], b = keep[all.at(to)];
        if (a && b) s.coding_map[c][*a] = *b;
      }
      continue;
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.color(e) != c) continue;
      for (AtomId y = 0; y < s.size(); ++y)
        if (auto x = s.prefix_map[e][y]) s.coding_map[c][*x] = y;
    }
  }
  return s;
}

std::vector<bool> interior_atoms(const Sbfs& s, int depth) {
  const KGraph& g = s.g();
  auto by_source = paths_by_source(g, depth);
  std::vector<bool> interior(s.size(), true);
  Degree bound = Degree::diagonal(static_cast<std::size_t>(g.rank()), depth);
  for (AtomId x = 0; x < s.size(); ++x) {
    bool ok = true;
    for (const auto& lam : by_source[s.home[x]]) {
      if (!s.prefix(lam, x)) {
        ok = false;
        break;
      }
    }
    if (ok)
      for_each_degree(bound, [&](const Degree& n) {
        if (ok && (!s.code(n, x) || !s.code_reversed(n, x))) ok = false;
      });
    interior[x] = ok;
  }
  return interior;
}

SbfsReport validate_sbfs(const Sbfs& s, int n_max) {
  const KGraph& g = s.g();
  SbfsReport rep;
  rep.n_max = n_max;
  auto interior = interior_atoms(s, 2 * n_max);
  rep.interior_atoms = static_cast<std::size_t>(std::count(interior.begin(), interior.end(), true));
  auto fail = [&](char c, std::string msg) {
    rep.passed = false;
    rep.conditions[c] = false;
    if (rep.failures.size() < 16) rep.failures.push_back({c, std::move(msg)});
  };
  const std::size_t k = static_cast<std::size_t>(g.rank());
  Degree bound = Degree::diagonal(k, n_max);
  auto all_paths = enumerate_paths_upto(g, bound);

  // (a) the ranges of each degree partition the carrier, tau_lambda injective, D_v non-null
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (sgn(s.domain_mass(v)) == 0) fail('a', "D_" + g.vertex_name(v) + " has measure zero");
  for_each_degree(bound, [&](const Degree& n) {
    std::vector<int> tally(s.size(), 0);
    for (const auto& lam : all_paths) {
      if (!(lam.degree() == n)) continue;
      std::set<AtomId> seen;
      for (AtomId y = 0; y < s.size(); ++y) {
        if (s.home[y] != lam.source()) continue;
        auto img = s.prefix(lam, y);
        if (!img) continue;
        ++tally[*img];
        if (!seen.insert(*img).second) fail('a', "tau_" + render(g, lam) + " is not injective at " + s.names[*img]);
        if (s.home[*img] != lam.range())
          fail('a', "tau_" + render(g, lam) + "(" + s.names[y] + ") leaves D_" + g.vertex_name(lam.range()));
      }
    }
    for (AtomId x = 0; x < s.size(); ++x)
      if (interior[x] && tally[x] != 1)
        fail('a', s.names[x] + " lies in " + std::to_string(tally[x]) + " ranges of degree " + n.str());
  });

  // (b) tau_v is the identity on D_v
  for (AtomId x = 0; x < s.size(); ++x)
    if (s.prefix(FinPath::vertex(g, s.home[x]), x) != x) fail('b', "tau_v moves " + s.names[x]);

  // (c) tau_lambda tau_nu = tau_{lambda nu}
  for (const auto& lam : all_paths)
    for (const auto& nu : all_paths) {
      if (lam.source() != nu.range() || lam.is_vertex() || nu.is_vertex()) continue;
      FinPath ln = compose(g, lam, nu);
      for (AtomId y = 0; y < s.size(); ++y) {
        if (!interior[y] || s.home[y] != nu.source()) continue;
        auto a = s.prefix(nu, y);
        auto lhs = a ? s.prefix(lam, *a) : std::nullopt;
        auto rhs = s.prefix(ln, y);
        if (lhs != rhs)
          fail('c', "tau_" + render(g, lam) + " tau_" + render(g, nu) + " != tau_" + render(g, ln) + " at " +
                        s.names[y]);
      }
    }

  // (d) tau^m tau^n = tau^{m+n}, colors commute, and tau^{d(lambda)} is a left inverse of tau_lambda
  for (AtomId x = 0; x < s.size(); ++x) {
    if (!interior[x]) continue;
    for_each_degree(bound, [&](const Degree& n) {
      auto a = s.code(n, x);
      if (a != s.code_reversed(n, x)) fail('d', "coding maps of degree " + n.str() + " do not commute at " + s.names[x]);
      for_each_degree(bound, [&](const Degree& m) {
        auto lhs = a ? s.code(m, *a) : std::nullopt;
        if (lhs != s.code(m + n, x))
          fail('d', "tau^" + m.str() + " tau^" + n.str() + " != tau^" + (m + n).str() + " at " + s.names[x]);
      });
    });
  }
  for (const auto& lam : all_paths) {
    if (lam.is_vertex()) continue;
    for (AtomId y = 0; y < s.size(); ++y) {
      if (!interior[y] || s.home[y] != lam.source()) continue;
      auto x = s.prefix(lam, y);
      if (x && s.code(lam.degree(), *x) != y)
        fail('d', "coding map is not a left inverse of tau_" + render(g, lam) + " at " + s.names[y]);
    }
  }
  return rep;
}

std::vector<std::pair<AtomId, Rational>> rn_derivative(const Sbfs& s, const FinPath& lambda) {
  std::vector<std::pair<AtomId, Rational>> out;
  for (AtomId y = 0; y < s.size(); ++y) {
    if (s.home[y] != lambda.source()) continue;
    auto w = s.image_weight(lambda, y);
    if (!w) continue;
    if (sgn(*w) == 0)
      throw SbfsError("Radon-Nikodym derivative of tau_" + render(s.g(), lambda) + " vanishes at " + s.names[y]);
    out.emplace_back(y, *w / s.weights[y]);
  }
  return out;
}

Scalar ProjectiveSystem::value(const FinPath& lambda, AtomId x) const {
  auto it = overrides_.find({lambda, x});
  if (it != overrides_.end()) return it->second;
  const Sbfs& s = *sbfs_;
  if (!s.in_range(lambda, x)) return Scalar{};
  AtomId y = *s.code(lambda.degree(), x);
  return Scalar(Surd::sqrt(s.weights[y] / s.weights[x]));
}

ProjectiveSystem standard_projective(std::shared_ptr<const Sbfs> s) { return ProjectiveSystem(std::move(s)); }

ProjectiveReport validate_projective(const ProjectiveSystem& p, int n_max, double tol) {
  const Sbfs& s = p.sbfs();
  const KGraph& g = s.g();
  ProjectiveReport rep;
  auto interior = interior_atoms(s, 2 * n_max);
  auto paths = enumerate_paths_upto(g, Degree::diagonal(static_cast<std::size_t>(g.rank()), n_max));
  auto fail = [&](bool& flag, std::string msg) {
    rep.passed = false;
    flag = false;
    if (rep.failures.size() < 16) rep.failures.push_back(std::move(msg));
  };
  for (const auto& lam : paths)
    for (AtomId x = 0; x < s.size(); ++x) {
      if (!interior[x]) continue;
      Scalar v = p.value(lam, x);
      if (!v.exact()) rep.exact = false;
      if (!s.in_range(lam, x)) {
        if (!v.is_zero(tol)) fail(rep.condition_a, "f_" + render(g, lam) + " is nonzero off R_lambda at " + s.names[x]);
        continue;
      }
      AtomId y = *s.code(lam.degree(), x);
      Rational want = s.weights[y] / s.weights[x];
      bool ok = v.exact() ? v.surd().square() == want : std::abs(v.value() * v.value() - want.get_d()) <= tol;
      if (!ok) fail(rep.condition_a, "|f_" + render(g, lam) + "(" + s.names[x] + ")|^2 != mu(tau^d x)/mu(x)");
    }
  for (const auto& lam : paths)
    for (const auto& nu : paths) {
      if (lam.source() != nu.range()) continue;
      FinPath ln = compose(g, lam, nu);
      for (AtomId x = 0; x < s.size(); ++x) {
        if (!interior[x]) continue;
        Scalar a = p.value(lam, x);
        Scalar lhs;
        if (!a.is_zero(tol)) {
          auto y = s.code(lam.degree(), x);
          if (!y) continue;
          lhs = a * p.value(nu, *y);
        }
        Scalar rhs = p.value(ln, x);
        if (!approx_equal(lhs, rhs, tol))
          fail(rep.condition_b, "f_" + render(g, lam) + " (f_" + render(g, nu) + " o tau^d) != f_" + render(g, ln) +
                                    " at " + s.names[x]);
      }
    }
  return rep;
}

PhiResult encode_phi(const Sbfs& s) {
  const KGraph& g = s.g();
  const Degree one = ones(g);
  PhiResult res;
  res.phi.resize(s.size());
  std::map<InfPath, AtomId> first;
  for (AtomId y = 0; y < s.size(); ++y) {
    std::map<AtomId, std::size_t> visited;
    std::vector<FinPath> deltas;
    AtomId cur = y;
    bool ok = true;
    while (!visited.count(cur)) {
      visited[cur] = deltas.size();
      auto d = s.coding_path(cur, one);
      auto nxt = s.code(one, cur);
      if (!d || !nxt) {
        ok = false;
        break;
      }
      deltas.push_back(*d);
      cur = *nxt;
    }
    if (!ok) {
      res.all_determined = false;
      continue;
    }
    std::size_t loop = visited[cur];
    FinPath pre = FinPath::vertex(g, s.home[y]);
    for (std::size_t i = 0; i < loop; ++i) pre = compose(g, pre, deltas[i]);
    FinPath cyc = FinPath::vertex(g, s.home[cur]);
    for (std::size_t i = loop; i < deltas.size(); ++i) cyc = compose(g, cyc, deltas[i]);
    InfPath x = make_inf_path(g, pre, cyc);
    res.phi[y] = x;
    auto [it, fresh] = first.emplace(x, y);
    if (!fresh) {
      res.injective = false;
      res.collisions.emplace_back(it->second, y);
    }
  }
  return res;
}

Sbfs restrict_sbfs(const Sbfs& s, const std::vector<AtomId>& keep, bool require_vertex_mass) {
  const KGraph& g = s.g();
  std::vector<std::optional<AtomId>> idx(s.size());
  Sbfs r;
  r.graph = s.graph;
  r.kind = s.kind;
  r.measure = s.measure;
  r.truncation = s.truncation;
  r.restricted = true;
  std::vector<AtomId> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (AtomId x : sorted) {
    idx[x] = static_cast<AtomId>(r.names.size());
    r.names.push_back(s.names[x]);
    r.weights.push_back(s.weights[x]);
    r.home.push_back(s.home[x]);
    if (!s.labels.empty()) r.labels.push_back(s.labels[x]);
  }
  for (AtomId x = 0; x < s.size(); ++x)
    for (int c = 0; c < g.rank(); ++c) {
      auto y = s.coding_map[c][x];
      if (y && idx[x].has_value() != idx[*y].has_value())
        throw SbfsError("set is not invariant: coding of color " + std::to_string(c + 1) + " links " + s.names[x] +
                        " and " + s.names[*y]);
    }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (AtomId y = 0; y < s.size(); ++y) {
      auto x = s.prefix_map[e][y];
      if (x && idx[y].has_value() != idx[*x].has_value())
        throw SbfsError("set is not invariant: tau_" + g.edge(e).name + " links " + s.names[y] + " and " + s.names[*x]);
    }
  if (require_vertex_mass)
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (std::find(r.home.begin(), r.home.end(), v) == r.home.end())
        throw SbfsError("restriction leaves D_" + g.vertex_name(v) + " with measure zero");
  r.prefix_map.assign(g.edge_count(), std::vector<std::optional<AtomId>>(r.size()));
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (AtomId y = 0; y < s.size(); ++y)
      if (idx[y])
        if (auto x = s.prefix_map[e][y]) r.prefix_map[e][*idx[y]] = idx[*x];
  r.coding_map.assign(static_cast<std::size_t>(g.rank()), std::vector<std::optional<AtomId>>(r.size()));
  for (int c = 0; c < g.rank(); ++c)
    for (AtomId x = 0; x < s.size(); ++x)
      if (idx[x])
        if (auto y = s.coding_map[c][x]) r.coding_map[c][*idx[x]] = idx[*y];
  return r;
}

std::vector<std::vector<AtomId>> coding_components(const Sbfs& s) {
  DisjointSets ds(s.size());
  for (int c = 0; c < s.g().rank(); ++c)
    for (AtomId x = 0; x < s.size(); ++x)
      if (auto y = s.coding_map[c][x]) ds.unite(x, *y);
  std::map<std::size_t, std::vector<AtomId>> groups;
  for (AtomId x = 0; x < s.size(); ++x) groups[ds.find(x)].push_back(x);
  std::vector<std::vector<AtomId>> out;
  for (auto& [r, v] : groups) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kg
