#pragma once

// Test-side generators and brute-force oracles. Path classes are computed directly from the square
// table, without the library's normal form.

#include "kgraph/infpaths.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace kg;
using Word = std::vector<EdgeId>;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ---- generators ----

/// Source-free 1-graph on 1..3 vertices; every vertex receives 1..2 edges.
inline std::shared_ptr<const KGraph> random_1graph(Rng& rng) {
  int n = uniform(rng, 1, 3);
  KGraph::Builder b(1);
  for (int v = 0; v < n; ++v) b.add_vertex("v" + std::to_string(v));
  int id = 0;
  for (int v = 0; v < n; ++v) {
    int d = uniform(rng, 1, 2);
    for (int i = 0; i < d; ++i)
      b.add_edge(0, "e" + std::to_string(id++), "v" + std::to_string(v), "v" + std::to_string(uniform(rng, 0, n - 1)));
  }
  return std::make_shared<KGraph>(b.build());
}

struct Raw {
  std::string name;
  int color;
  int range, source;
};

/// Pairs color-1-then-2 paths with color-2-then-1 paths by a random bijection inside each
/// (range, source) block.
inline std::shared_ptr<const KGraph> assemble(int n, const std::vector<Raw>& edges, Rng& rng) {
  KGraph::Builder b(2);
  for (int v = 0; v < n; ++v) b.add_vertex("v" + std::to_string(v));
  for (const auto& e : edges) b.add_edge(e.color, e.name, "v" + std::to_string(e.range), "v" + std::to_string(e.source));
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> fwd, bwd;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = 0; j < edges.size(); ++j) {
      const auto &x = edges[i], &y = edges[j];
      if (x.color == y.color || x.source != y.range) continue;
      (x.color == 0 ? fwd : bwd)[{x.range, y.source}].emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  for (auto& [rs, list] : fwd) {
    auto back = bwd[rs];
    std::shuffle(back.begin(), back.end(), rng);
    for (std::size_t t = 0; t < list.size(); ++t)
      b.add_square(edges[list[t].first].name, edges[list[t].second].name, edges[back[t].first].name,
                   edges[back[t].second].name);
  }
  return std::make_shared<KGraph>(b.build());
}

/// Cartesian product of two small source-free 1-graphs with random squares.
inline std::shared_ptr<const KGraph> random_product_2graph(Rng& rng) {
  auto side = [&](int& n) {
    n = uniform(rng, 1, 2);
    std::vector<std::pair<int, int>> es;  // (range, source)
    for (int v = 0; v < n; ++v) {
      int d = uniform(rng, 1, 2);
      for (int i = 0; i < d; ++i) es.emplace_back(v, uniform(rng, 0, n - 1));
    }
    return es;
  };
  int n1 = 0, n2 = 0;
  auto e1 = side(n1);
  auto e2 = side(n2);
  auto vid = [&](int i, int j) { return i * n2 + j; };
  std::vector<Raw> edges;
  int id = 0;
  for (const auto& [r, s] : e1)
    for (int j = 0; j < n2; ++j) edges.push_back({"a" + std::to_string(id++), 0, vid(r, j), vid(s, j)});
  for (int i = 0; i < n1; ++i)
    for (const auto& [r, s] : e2) edges.push_back({"b" + std::to_string(id++), 1, vid(i, r), vid(i, s)});
  return assemble(n1 * n2, edges, rng);
}

/// One vertex, 1..3 loops of each color, random square bijection.
inline std::shared_ptr<const KGraph> random_1vertex_2graph(Rng& rng) {
  int m1 = uniform(rng, 1, 3), m2 = uniform(rng, 1, 3);
  std::vector<Raw> edges;
  for (int i = 0; i < m1; ++i) edges.push_back({"a" + std::to_string(i), 0, 0, 0});
  for (int i = 0; i < m2; ++i) edges.push_back({"b" + std::to_string(i), 1, 0, 0});
  return assemble(1, edges, rng);
}

inline std::shared_ptr<const KGraph> random_graph(Rng& rng, int i) {
  switch (i % 3) {
    case 0: return random_1graph(rng);
    case 1: return random_product_2graph(rng);
    default: return random_1vertex_2graph(rng);
  }
}

// ---- word classes ----

class Classes {
 public:
  explicit Classes(const KGraph& g) : g_(g) {
    for (const auto& s : g.squares()) {
      move_[{s.e, s.f}] = {s.fhat, s.ehat};
      move_[{s.fhat, s.ehat}] = {s.e, s.f};
    }
  }

  /// All words reachable by square moves.
  const std::set<Word>& cls(const Word& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return *it->second;
    auto out = std::make_shared<std::set<Word>>();
    std::deque<Word> q{w};
    out->insert(w);
    while (!q.empty()) {
      Word x = q.front();
      q.pop_front();
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        auto m = move_.find({x[i], x[i + 1]});
        if (m == move_.end()) continue;
        Word y = x;
        y[i] = m->second.first;
        y[i + 1] = m->second.second;
        if (out->insert(y).second) q.push_back(y);
      }
    }
    for (const auto& y : *out) memo_[y] = out;
    return *out;
  }
  Word key(const Word& w) { return *cls(w).begin(); }

  bool has_prefix(const Word& zeta, const Word& lambda) {
    if (lambda.size() > zeta.size()) return false;
    if (lambda.empty()) return true;
    const auto& lc = cls(lambda);
    for (const auto& w : cls(zeta))
      if (lc.count(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lambda.size())))) return true;
    return false;
  }

 private:
  const KGraph& g_;
  std::map<std::pair<EdgeId, EdgeId>, std::pair<EdgeId, EdgeId>> move_;
  std::map<Word, std::shared_ptr<std::set<Word>>> memo_;
};

/// Every word of degree n with range v, one per path, colors in increasing order.
inline std::vector<Word> words(const KGraph& g, VertexId v, const std::vector<int>& n) {
  std::vector<int> colors;
  for (std::size_t c = 0; c < n.size(); ++c)
    for (int i = 0; i < n[c]; ++i) colors.push_back(static_cast<int>(c));
  std::vector<Word> out;
  Word cur;
  std::function<void(VertexId)> rec = [&](VertexId at) {
    if (cur.size() == colors.size()) {
      out.push_back(cur);
      return;
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.edge(e).color != colors[cur.size()] || g.edge(e).range != at) continue;
      cur.push_back(e);
      rec(g.edge(e).source);
      cur.pop_back();
    }
  };
  rec(v);
  return out;
}

inline std::vector<int> degree_of(const KGraph& g, const Word& w) {
  std::vector<int> d(static_cast<std::size_t>(g.rank()), 0);
  for (EdgeId e : w) ++d[static_cast<std::size_t>(g.color(e))];
  return d;
}

/// Random path of degree <= bound, as a color-sorted word with range v.
inline Word random_word(const KGraph& g, VertexId v, int bound, Rng& rng) {
  std::vector<int> n(static_cast<std::size_t>(g.rank()));
  for (auto& x : n) x = uniform(rng, 0, bound);
  auto ws = words(g, v, n);
  if (ws.empty()) return {};
  return ws[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ws.size()) - 1))];
}

/// Brute-force minimal common extensions: paths of degree d(lambda) v d(eta) with both as prefixes.
inline std::set<Word> mce_oracle(const KGraph& g, Classes& cl, const Word& lambda, const Word& eta, VertexId v) {
  auto a = degree_of(g, lambda), b = degree_of(g, eta);
  std::vector<int> j(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) j[i] = std::max(a[i], b[i]);
  std::set<Word> out;
  for (const auto& z : words(g, v, j))
    if (cl.has_prefix(z, lambda) && cl.has_prefix(z, eta)) out.insert(cl.key(z));
  return out;
}

/// vertices w with a path of range v and source w, by breadth-first search over raw edges.
inline std::set<VertexId> reach_oracle(const KGraph& g, VertexId v) {
  std::set<VertexId> seen{v};
  std::deque<VertexId> q{v};
  while (!q.empty()) {
    VertexId a = q.front();
    q.pop_front();
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).range == a && seen.insert(g.edge(e).source).second) q.push_back(g.edge(e).source);
  }
  return seen;
}

}  // namespace oracle
