#include "kgraph/paths.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace kg {

FinPath FinPath::vertex(const KGraph& g, VertexId v) {
  if (v >= g.vertex_count()) throw std::out_of_range("vertex id out of range");
  return make_path_from(g, v, {});
}

std::vector<EdgeId> arrange(const KGraph& g, std::vector<EdgeId> word, const std::vector<int>& target) {
  if (target.size() != word.size()) throw std::invalid_argument("arrange: length mismatch");
  for (std::size_t pos = 0; pos < word.size(); ++pos) {
    std::size_t j = pos;
    while (j < word.size() && g.color(word[j]) != target[pos]) ++j;
    if (j == word.size()) throw std::invalid_argument("arrange: color multiset mismatch");
    for (; j > pos; --j) {
      auto [a, b] = g.swap(word[j - 1], word[j]);
      word[j - 1] = a;
      word[j] = b;
    }
  }
  return word;
}

FinPath make_path_from(const KGraph& g, VertexId v, std::span<const EdgeId> word) {
  FinPath p;
  p.range_ = v;
  p.degree_ = Degree(static_cast<std::size_t>(g.rank()));
  VertexId at = v;
  for (EdgeId e : word) {
    if (e >= g.edge_count()) throw std::invalid_argument("edge id out of range");
    if (g.edge(e).range != at)
      throw std::invalid_argument("edges are not composable at '" + g.edge(e).name + "'");
    at = g.edge(e).source;
    p.degree_[g.color(e)] += 1;
  }
  p.source_ = at;
  std::vector<int> colors;
  colors.reserve(word.size());
  for (EdgeId e : word) colors.push_back(g.color(e));
  if (std::is_sorted(colors.begin(), colors.end())) {
    p.edges_.assign(word.begin(), word.end());
    return p;
  }
  std::sort(colors.begin(), colors.end());
  p.edges_ = arrange(g, std::vector<EdgeId>(word.begin(), word.end()), colors);
  return p;
}

FinPath make_path(const KGraph& g, std::span<const EdgeId> word) {
  if (word.empty()) throw std::invalid_argument("make_path: empty word has no range");
  return make_path_from(g, g.edge(word.front()).range, word);
}

FinPath compose(const KGraph& g, const FinPath& lambda, const FinPath& nu) {
  if (lambda.source() != nu.range())
    throw std::invalid_argument("compose: s(lambda) = " + g.vertex_name(lambda.source()) + " but r(nu) = " +
                                g.vertex_name(nu.range()));
  std::vector<EdgeId> w = lambda.edges();
  w.insert(w.end(), nu.edges().begin(), nu.edges().end());
  return make_path_from(g, lambda.range(), w);
}

FinPath power(const KGraph& g, const FinPath& lambda, int n) {
  if (n > 0 && lambda.source() != lambda.range()) throw std::invalid_argument("power: path is not a cycle");
  std::vector<EdgeId> w;
  for (int i = 0; i < n; ++i) w.insert(w.end(), lambda.edges().begin(), lambda.edges().end());
  return make_path_from(g, lambda.range(), w);
}

std::pair<FinPath, FinPath> factorize(const KGraph& g, const FinPath& lambda, const Degree& m) {
  const Degree& d = lambda.degree();
  if (!(m <= d)) throw std::invalid_argument("factorize: " + m.str() + " is not <= " + d.str());
  std::vector<int> target;
  for (int c = 0; c < g.rank(); ++c) target.insert(target.end(), m[c], c);
  for (int c = 0; c < g.rank(); ++c) target.insert(target.end(), d[c] - m[c], c);
  auto w = arrange(g, lambda.edges(), target);
  std::size_t cut = static_cast<std::size_t>(m.total());
  std::span<const EdgeId> all(w);
  FinPath mu = make_path_from(g, lambda.range(), all.first(cut));
  FinPath nu = make_path_from(g, mu.source(), all.subspan(cut));
  return {std::move(mu), std::move(nu)};
}

FinPath subpath(const KGraph& g, const FinPath& lambda, const Degree& m, const Degree& n) {
  if (!(m <= n)) throw std::invalid_argument("subpath: m is not <= n");
  return factorize(g, factorize(g, lambda, n).first, m).second;
}

VertexId vertex_at(const KGraph& g, const FinPath& lambda, const Degree& m) {
  return factorize(g, lambda, m).first.source();
}

bool has_prefix(const KGraph& g, const FinPath& xi, const FinPath& lambda) {
  if (xi.range() != lambda.range() || !(lambda.degree() <= xi.degree())) return false;
  return factorize(g, xi, lambda.degree()).first == lambda;
}

namespace {

void forward_chains(const KGraph& g, const Degree& n, int color, int left, VertexId at, std::vector<EdgeId>& word,
                    VertexId v, std::vector<FinPath>& out) {
  while (color < g.rank() && left == 0) {
    ++color;
    if (color < g.rank()) left = n[color];
  }
  if (color >= g.rank()) {
    out.push_back(make_path_from(g, v, word));
    return;
  }
  for (EdgeId e : g.edges_into(at, color)) {
    word.push_back(e);
    forward_chains(g, n, color, left - 1, g.edge(e).source, word, v, out);
    word.pop_back();
  }
}

void backward_chains(const KGraph& g, const Degree& n, int color, int left, VertexId at, std::vector<EdgeId>& rev,
                     std::vector<FinPath>& out) {
  while (color >= 0 && left == 0) {
    --color;
    if (color >= 0) left = n[color];
  }
  if (color < 0) {
    std::vector<EdgeId> word(rev.rbegin(), rev.rend());
    out.push_back(make_path_from(g, at, word));
    return;
  }
  for (EdgeId e : g.edges_out(at, color)) {
    rev.push_back(e);
    backward_chains(g, n, color, left - 1, g.edge(e).range, rev, out);
    rev.pop_back();
  }
}

}  // namespace

std::vector<FinPath> enumerate_paths(const KGraph& g, VertexId v, const Degree& n) {
  std::vector<FinPath> out;
  std::vector<EdgeId> word;
  forward_chains(g, n, 0, n[0], v, word, v, out);
  return out;
}

std::vector<FinPath> enumerate_paths_from(const KGraph& g, VertexId v, const Degree& n) {
  std::vector<FinPath> out;
  std::vector<EdgeId> rev;
  int last = g.rank() - 1;
  backward_chains(g, n, last, n[last], v, rev, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FinPath> enumerate_paths_upto(const KGraph& g, const Degree& bound) {
  std::vector<FinPath> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for_each_degree(bound, [&](const Degree& d) {
      auto ps = enumerate_paths(g, v, d);
      out.insert(out.end(), ps.begin(), ps.end());
    });
  return out;
}

std::vector<std::pair<FinPath, FinPath>> lambda_min(const KGraph& g, const FinPath& lambda, const FinPath& eta) {
  std::vector<std::pair<FinPath, FinPath>> out;
  if (lambda.range() != eta.range()) return out;
  Degree top = join(lambda.degree(), eta.degree());
  for (const FinPath& alpha : enumerate_paths(g, lambda.source(), top - lambda.degree())) {
    FinPath xi = compose(g, lambda, alpha);
    auto [head, beta] = factorize(g, xi, eta.degree());
    if (head == eta) out.emplace_back(alpha, beta);
  }
  return out;
}

std::vector<FinPath> mce(const KGraph& g, const FinPath& lambda, const FinPath& eta) {
  std::vector<FinPath> out;
  for (const auto& [alpha, beta] : lambda_min(g, lambda, eta)) out.push_back(compose(g, lambda, alpha));
  return out;
}

std::string render(const KGraph& g, const FinPath& lambda) {
  if (lambda.is_vertex()) return g.vertex_name(lambda.range());
  std::string s;
  int prev = -1;
  for (EdgeId e : lambda.edges()) {
    int c = g.color(e);
    if (prev >= 0) s += (c == prev ? "." : "|");
    s += g.edge(e).name;
    prev = c;
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

FinPath parse_path(const KGraph& g, std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty path");
  if (text.find_first_of(".|") == std::string_view::npos) {
    if (auto v = g.find_vertex(text)) return FinPath::vertex(g, *v);
  }
  std::vector<EdgeId> word;
  std::size_t i = 0;
  while (true) {
    std::size_t j = text.find_first_of(".|", i);
    std::string_view name = trim(text.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    auto e = g.find_edge(name);
    if (!e) throw std::invalid_argument("unknown edge '" + std::string(name) + "' in path '" + std::string(text) + "'");
    word.push_back(*e);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return make_path(g, word);
}

CylUnion::CylUnion(std::vector<FinPath> parts) : parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end());
}

CylUnion cyl(const FinPath& lambda) { return CylUnion({lambda}); }

namespace {

// Pieces of Z(c) \ Z(q) for each c, as cylinders of degree d(c) v d(q) where they had to be split.
std::vector<FinPath> subtract_one(const KGraph& g, const std::vector<FinPath>& current, const FinPath& q) {
  std::vector<FinPath> next;
  for (const auto& c : current) {
    if (c.range() != q.range()) {
      next.push_back(c);
      continue;
    }
    auto common = mce(g, c, q);
    if (common.empty()) {
      next.push_back(c);
      continue;
    }
    if (has_prefix(g, c, q)) continue;
    Degree top = join(c.degree(), q.degree());
    std::set<FinPath> drop(common.begin(), common.end());
    for (const auto& alpha : enumerate_paths(g, c.source(), top - c.degree())) {
      FinPath xi = compose(g, c, alpha);
      if (!drop.count(xi)) next.push_back(std::move(xi));
    }
  }
  return next;
}

}  // namespace

CylUnion normalize(const KGraph& g, std::vector<FinPath> parts) {
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::vector<FinPath> kept;
  for (const auto& p : parts) {
    bool covered = std::any_of(parts.begin(), parts.end(),
                               [&](const FinPath& q) { return !(q == p) && has_prefix(g, p, q); });
    if (!covered) kept.push_back(p);
  }
  // overlapping cylinders: keep the earlier one and split the later one around it
  std::vector<FinPath> out;
  for (const auto& p : kept) {
    std::vector<FinPath> pieces{p};
    for (const auto& q : out) pieces = subtract_one(g, pieces, q);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return CylUnion(std::move(out));
}

CylUnion cyl_intersect(const KGraph& g, const CylUnion& a, const CylUnion& b) {
  std::vector<FinPath> out;
  for (const auto& p : a.parts())
    for (const auto& q : b.parts()) {
      auto m = mce(g, p, q);
      out.insert(out.end(), m.begin(), m.end());
    }
  return normalize(g, std::move(out));
}

CylUnion cyl_subtract(const KGraph& g, const CylUnion& a, const CylUnion& b) {
  std::vector<FinPath> out;
  for (const auto& p : a.parts()) {
    std::vector<FinPath> current{p};
    for (const auto& q : b.parts()) current = subtract_one(g, current, q);
    out.insert(out.end(), current.begin(), current.end());
  }
  return normalize(g, std::move(out));
}

CylUnion cyl_union(const KGraph& g, const CylUnion& a, const CylUnion& b) {
  auto extra = cyl_subtract(g, b, a);
  std::vector<FinPath> parts = a.parts();
  parts.insert(parts.end(), extra.parts().begin(), extra.parts().end());
  return normalize(g, std::move(parts));
}

bool cyl_is_partition(const KGraph& g, const FinPath& lambda, const std::vector<FinPath>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (!mce(g, parts[i], parts[j]).empty()) return false;
  CylUnion whole = cyl(lambda), pieces(parts);
  return cyl_subtract(g, whole, pieces).empty() && cyl_subtract(g, pieces, whole).empty();
}

std::vector<FinPath> refine_to(const KGraph& g, const CylUnion& a, const Degree& d) {
  std::vector<FinPath> out;
  for (const auto& p : a.parts()) {
    Degree top = join(p.degree(), d);
    for (const auto& alpha : enumerate_paths(g, p.source(), top - p.degree())) out.push_back(compose(g, p, alpha));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string render(const KGraph& g, const CylUnion& a) {
  if (a.empty()) return "empty";
  std::string s;
  for (std::size_t i = 0; i < a.parts().size(); ++i) s += (i ? "+Z(" : "Z(") + render(g, a.parts()[i]) + ")";
  return s;
}

CylUnion parse_cyl_union(const KGraph& g, std::string_view text) {
  text = trim(text);
  CylUnion acc;
  if (text.empty() || text == "empty") return acc;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find('+', i);
    std::string_view term = trim(text.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (term.size() < 3 || term.substr(0, 2) != "Z(" || term.back() != ')')
      throw std::invalid_argument("expected Z(path) but found '" + std::string(term) + "'");
    acc = cyl_union(g, acc, cyl(parse_path(g, term.substr(2, term.size() - 3))));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return acc;
}

}  // namespace kg
