#include "kgraph/infpaths.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace kg {

namespace {

Degree ones(const KGraph& g) { return Degree::diagonal(static_cast<std::size_t>(g.rank()), 1); }

// prefix cycle^n with n large enough that its degree is >= q.
FinPath unroll(const KGraph& g, const FinPath& prefix, const FinPath& cycle, const Degree& q) {
  int n = 0;
  for (int i = 0; i < g.rank(); ++i) {
    int need = q[i] - prefix.degree()[i];
    if (need > 0) n = std::max(n, (need + cycle.degree()[i] - 1) / cycle.degree()[i]);
  }
  return compose(g, prefix, power(g, cycle, n));
}

FinPath raw_segment(const KGraph& g, const FinPath& prefix, const FinPath& cycle, const Degree& p, const Degree& q) {
  return subpath(g, unroll(g, prefix, cycle, q), p, q);
}

}  // namespace

InfPath make_inf_path(const KGraph& g, const FinPath& prefix, const FinPath& cycle) {
  if (prefix.source() != cycle.range() || cycle.range() != cycle.source())
    throw std::invalid_argument("infinite path: cycle must be a cycle at s(prefix)");
  if (!(ones(g) <= cycle.degree()))
    throw std::invalid_argument("infinite path: cycle degree " + cycle.degree().str() + " is not >= (1,...,1)");
  const int k = g.rank();
  const Degree one = ones(g);
  int n0 = prefix.degree().max();
  auto diag = [&](int n) { return Degree::diagonal(static_cast<std::size_t>(k), n); };
  // sigma^{n1}(x) is determined by x(n1, n1 + d(cycle)) once n1 >= d(prefix).
  std::map<FinPath, int> seen;
  int first = 0, again = 0;
  for (int n = n0;; ++n) {
    FinPath key = raw_segment(g, prefix, cycle, diag(n), diag(n) + cycle.degree());
    auto [it, fresh] = seen.emplace(key, n);
    if (!fresh) {
      first = it->second;
      again = n;
      break;
    }
  }
  int t = again - first;
  int s = first;
  // Unit steps delta_n = x(n1, (n+1)1) for n < first + t.
  FinPath big = unroll(g, prefix, cycle, diag(first + t) + one);
  auto delta = [&](int n) { return subpath(g, big, diag(n), diag(n + 1)); };
  while (s > 0 && delta(s - 1) == delta(s - 1 + t)) --s;
  InfPath x;
  x.prefix_ = subpath(g, big, diag(0), diag(s));
  x.cycle_ = subpath(g, big, diag(s), diag(s + t));
  return x;
}

FinPath window(const KGraph& g, const InfPath& x, const Degree& q) {
  return raw_segment(g, x.prefix(), x.cycle(), Degree(static_cast<std::size_t>(g.rank())), q);
}

FinPath segment(const KGraph& g, const InfPath& x, const Degree& p, const Degree& q) {
  return raw_segment(g, x.prefix(), x.cycle(), p, q);
}

bool in_cylinder(const KGraph& g, const InfPath& x, const FinPath& lambda) {
  if (lambda.range() != x.range()) return false;
  return window(g, x, lambda.degree()) == lambda;
}

InfPath shift(const KGraph& g, const InfPath& x, const Degree& m) {
  FinPath big = unroll(g, x.prefix(), x.cycle(), m);
  FinPath rest = factorize(g, big, m).second;
  return make_inf_path(g, rest, x.cycle());
}

InfPath prefix_path(const KGraph& g, const FinPath& lambda, const InfPath& x) {
  if (lambda.source() != x.range())
    throw std::invalid_argument("prefix_path: s(lambda) = " + g.vertex_name(lambda.source()) + " but r(x) = " +
                                g.vertex_name(x.range()));
  return make_inf_path(g, compose(g, lambda, x.prefix()), x.cycle());
}

bool inf_path_eq(const InfPath& x, const InfPath& y) { return x == y; }

bool window_equal(const KGraph& g, const InfPath& x, const InfPath& y) {
  if (x.range() != y.range()) return false;
  // Both are periodic from W0 on with period lcm of the cycle lengths; two full periods suffice.
  int a = std::max(x.prefix().degree().max(), y.prefix().degree().max());
  long p = std::lcm(static_cast<long>(x.cycle().degree().max()), static_cast<long>(y.cycle().degree().max()));
  Degree w = Degree::diagonal(static_cast<std::size_t>(g.rank()), a + static_cast<int>(2 * p));
  for (int i = 0; i < g.rank(); ++i) {
    // cover every coordinate's period as well
    long pi = std::lcm(static_cast<long>(x.cycle().degree()[i]), static_cast<long>(y.cycle().degree()[i]));
    w[i] = std::max(w[i], a + static_cast<int>(2 * pi));
  }
  return window(g, x, w) == window(g, y, w);
}

std::vector<InfPath> tail_set(const KGraph& g, const InfPath& x) {
  std::set<InfPath> seen{x};
  std::deque<InfPath> queue{x};
  while (!queue.empty()) {
    InfPath y = queue.front();
    queue.pop_front();
    for (int i = 0; i < g.rank(); ++i) {
      InfPath z = shift(g, y, Degree::unit(static_cast<std::size_t>(g.rank()), static_cast<std::size_t>(i)));
      if (seen.insert(z).second) queue.push_back(z);
    }
  }
  return {seen.begin(), seen.end()};
}

bool same_orbit(const KGraph& g, const InfPath& x, const InfPath& y) {
  auto a = tail_set(g, x), b = tail_set(g, y);
  std::vector<InfPath> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return !common.empty();
}

std::string render(const KGraph& g, const InfPath& x) {
  return render(g, x.prefix()) + " * " + render(g, x.cycle());
}

InfPath parse_inf_path(const KGraph& g, std::string_view text) {
  auto star = text.find('*');
  if (star == std::string_view::npos) throw std::invalid_argument("infinite path needs '<prefix> * <cycle>'");
  FinPath cycle = parse_path(g, text.substr(star + 1));
  std::string_view head = text.substr(0, star);
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.remove_suffix(1);
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front()))) head.remove_prefix(1);
  FinPath prefix = head.empty() ? FinPath::vertex(g, cycle.range()) : parse_path(g, head);
  return make_inf_path(g, prefix, cycle);
}

std::vector<bool> reachable_sources(const KGraph& g, VertexId v) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<VertexId> queue{v};
  seen[v] = true;
  while (!queue.empty()) {
    VertexId a = queue.front();
    queue.pop_front();
    for (int c = 0; c < g.rank(); ++c)
      for (EdgeId e : g.edges_into(a, c)) {
        VertexId b = g.edge(e).source;
        if (!seen[b]) {
          seen[b] = true;
          queue.push_back(b);
        }
      }
  }
  return seen;
}

namespace {

// Every grid vertex of lambda lies in `allowed`.
bool grid_inside(const KGraph& g, const FinPath& lambda, const std::vector<bool>& allowed) {
  bool ok = true;
  for_each_degree(lambda.degree(), [&](const Degree& m) {
    if (ok && !allowed[vertex_at(g, lambda, m)]) ok = false;
  });
  return ok;
}

}  // namespace

CofinalityResult is_cofinal(const KGraph& g) {
  CofinalityResult res;
  auto flags = structural_flags(g);
  if (!flags.source_free) {
    res.applicable = false;
    res.note = "graph has sources";
    return res;
  }
  const Degree one = ones(g);
  const std::size_t nv = g.vertex_count();
  for (VertexId v = 0; v < nv; ++v) {
    auto reach = reachable_sources(g, v);
    std::vector<bool> in(nv);
    for (VertexId w = 0; w < nv; ++w) in[w] = !reach[w];
    // Greatest set S inside the unreachable vertices from which every step can stay in S.
    std::map<VertexId, std::vector<FinPath>> steps;
    bool changed = true;
    while (changed) {
      changed = false;
      for (VertexId w = 0; w < nv; ++w) {
        if (!in[w]) continue;
        std::vector<FinPath> ok;
        for (const auto& lam : enumerate_paths(g, w, one))
          if (grid_inside(g, lam, in)) ok.push_back(lam);
        if (ok.empty()) {
          in[w] = false;
          changed = true;
        } else {
          steps[w] = std::move(ok);
        }
      }
    }
    VertexId start = 0;
    bool any = false;
    for (VertexId w = 0; w < nv && !any; ++w)
      if (in[w]) {
        start = w;
        any = true;
      }
    if (!any) continue;
    // Move into a terminal strongly connected piece: follow steps until a vertex repeats.
    std::vector<VertexId> order;
    std::vector<FinPath> taken;
    std::map<VertexId, std::size_t> pos;
    VertexId at = start;
    // Prefer the smallest vertex that lies on a cycle of the step graph.
    {
      std::vector<std::vector<bool>> reach(nv, std::vector<bool>(nv, false));
      for (VertexId w = 0; w < nv; ++w)
        if (in[w])
          for (const auto& lam : steps[w]) reach[w][lam.source()] = true;
      for (VertexId m = 0; m < nv; ++m)
        for (VertexId a = 0; a < nv; ++a)
          if (reach[a][m])
            for (VertexId b = 0; b < nv; ++b)
              if (reach[m][b]) reach[a][b] = true;
      // terminal: every vertex reachable from it reaches it back
      for (VertexId w = 0; w < nv; ++w) {
        if (!in[w]) continue;
        bool terminal = reach[w][w];
        for (VertexId b = 0; b < nv && terminal; ++b)
          if (reach[w][b] && !reach[b][w]) terminal = false;
        if (terminal) {
          at = w;
          break;
        }
      }
    }
    while (!pos.count(at)) {
      pos[at] = order.size();
      order.push_back(at);
      const FinPath& lam = steps[at].front();
      taken.push_back(lam);
      at = lam.source();
    }
    std::size_t loop = pos[at];
    FinPath pre = FinPath::vertex(g, order.front());
    for (std::size_t i = 0; i < loop; ++i) pre = compose(g, pre, taken[i]);
    FinPath cyc = FinPath::vertex(g, at);
    for (std::size_t i = loop; i < taken.size(); ++i) cyc = compose(g, cyc, taken[i]);
    res.cofinal = false;
    res.witness_vertex = v;
    res.witness_path = make_inf_path(g, pre, cyc);
    return res;
  }
  return res;
}

bool is_periodic_pair(const KGraph& g, const FinPath& lambda, const FinPath& nu, int depth) {
  if (lambda.source() != nu.source() || lambda.range() != nu.range()) return false;
  const std::size_t k = static_cast<std::size_t>(g.rank());
  for (int n : {0, 1, depth, depth + 1}) {
    Degree ext = Degree::diagonal(k, n);
    Degree w = meet(lambda.degree(), nu.degree()) + ext;
    for (const auto& gamma : enumerate_paths(g, lambda.source(), ext)) {
      FinPath a = factorize(g, compose(g, lambda, gamma), w).first;
      FinPath b = factorize(g, compose(g, nu, gamma), w).first;
      if (!(a == b)) return false;
    }
  }
  return true;
}

std::vector<std::vector<long>> lattice_basis(std::vector<std::vector<long>> gens, std::size_t k) {
  std::vector<std::vector<long>> basis;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k; ++col) {
    // gcd-reduce column col among rows >= row
    while (true) {
      std::size_t pivot = gens.size();
      for (std::size_t r = row; r < gens.size(); ++r)
        if (gens[r][col] != 0 && (pivot == gens.size() || std::abs(gens[r][col]) < std::abs(gens[pivot][col])))
          pivot = r;
      if (pivot == gens.size()) break;
      std::swap(gens[row], gens[pivot]);
      bool reduced = true;
      for (std::size_t r = row + 1; r < gens.size(); ++r) {
        long q = gens[r][col] / gens[row][col];
        for (std::size_t c = 0; c < k; ++c) gens[r][c] -= q * gens[row][c];
        if (gens[r][col] != 0) reduced = false;
      }
      if (reduced) {
        if (gens[row][col] < 0)
          for (auto& x : gens[row]) x = -x;
        basis.push_back(gens[row]);
        ++row;
        break;
      }
    }
  }
  return basis;
}

bool lattice_contains(const std::vector<std::vector<long>>& basis, std::vector<long> v) {
  for (const auto& b : basis) {
    std::size_t col = 0;
    while (col < b.size() && b[col] == 0) ++col;
    if (col == b.size()) continue;
    for (std::size_t c = 0; c < col; ++c)
      if (v[c] != 0) return false;
    if (v[col] % b[col] != 0) return false;
    long q = v[col] / b[col];
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= q * b[c];
  }
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

PeriodicityReport periodic_pairs(const KGraph& g, int depth) {
  PeriodicityReport rep;
  rep.depth = depth;
  const std::size_t k = static_cast<std::size_t>(g.rank());
  std::vector<FinPath> all;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for_each_degree(Degree::diagonal(k, depth), [&](const Degree& d) {
      if (d.total() > depth) return;
      auto ps = enumerate_paths(g, v, d);
      all.insert(all.end(), ps.begin(), ps.end());
    });
  std::map<VertexId, std::vector<const FinPath*>> by_source;
  for (const auto& p : all) by_source[p.source()].push_back(&p);
  std::set<std::pair<FinPath, FinPath>> periodic;
  std::vector<std::vector<long>> gens;
  for (auto& [w, group] : by_source) {
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const FinPath &a = *group[i], &b = *group[j];
        if (a.range() != b.range()) continue;
        if (!is_periodic_pair(g, a, b, depth)) continue;
        periodic.insert({a, b});
        periodic.insert({b, a});
        rep.pairs.push_back({a, b});
        std::vector<long> diff(k);
        for (std::size_t c = 0; c < k; ++c) diff[c] = a.degree()[c] - b.degree()[c];
        gens.push_back(diff);
      }
  }
  rep.per_group = lattice_basis(gens, k);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    bool ok = true;
    for (const auto& lam : all) {
      if (!ok) break;
      if (lam.range() != v) continue;
      for_each_degree(Degree::diagonal(k, depth), [&](const Degree& m) {
        if (!ok || m.total() > depth) return;
        std::vector<long> diff(k);
        for (std::size_t c = 0; c < k; ++c) diff[c] = lam.degree()[c] - m[c];
        if (!lattice_contains(rep.per_group, diff)) return;
        bool found = false;
        for (const auto& mu : enumerate_paths(g, v, m))
          if (mu == lam || periodic.count({lam, mu})) {
            found = true;
            break;
          }
        if (!found) ok = false;
      });
    }
    if (ok) rep.h_per.push_back(v);
  }
  rep.character_candidate.assign(k, "0");
  return rep;
}

}  // namespace kg
