#include "kgraph/kgraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace kg {

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '\'';
    if (!ok) return false;
  }
  return true;
}

std::optional<VertexId> KGraph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> KGraph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(name);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<EdgeId, EdgeId>> KGraph::swaps(EdgeId x, EdgeId y) const {
  const auto& table = color(x) < color(y) ? forward_ : backward_;
  std::vector<std::pair<EdgeId, EdgeId>> out;
  auto [lo, hi] = table.equal_range({x, y});
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

std::pair<EdgeId, EdgeId> KGraph::swap(EdgeId x, EdgeId y) const {
  const auto& table = color(x) < color(y) ? forward_ : backward_;
  auto it = table.find({x, y});
  if (it == table.end())
    throw std::logic_error("no square for " + edges_[x].name + " " + edges_[y].name);
  return it->second;
}

KGraph::Builder::Builder(int rank) : rank_(rank) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
}

VertexId KGraph::Builder::add_vertex(const std::string& name) {
  if (!valid_name(name)) throw std::invalid_argument("invalid vertex name '" + name + "'");
  if (std::find(vertices_.begin(), vertices_.end(), name) != vertices_.end())
    throw std::invalid_argument("duplicate vertex '" + name + "'");
  for (const auto& e : edges_)
    if (e.name == name) throw std::invalid_argument("name '" + name + "' already used by an edge");
  vertices_.push_back(name);
  return static_cast<VertexId>(vertices_.size() - 1);
}

void KGraph::Builder::add_edge(int color, const std::string& name, const std::string& range,
                               const std::string& source) {
  if (color < 0 || color >= rank_)
    throw std::invalid_argument("color " + std::to_string(color + 1) + " out of range 1.." + std::to_string(rank_));
  if (!valid_name(name)) throw std::invalid_argument("invalid edge name '" + name + "'");
  if (std::find(vertices_.begin(), vertices_.end(), name) != vertices_.end())
    throw std::invalid_argument("name '" + name + "' already used by a vertex");
  for (const auto& e : edges_)
    if (e.name == name) throw std::invalid_argument("duplicate edge '" + name + "'");
  for (const auto* v : {&range, &source})
    if (std::find(vertices_.begin(), vertices_.end(), *v) == vertices_.end())
      throw std::invalid_argument("unknown vertex '" + *v + "'");
  edges_.push_back({color, name, range, source});
}

void KGraph::Builder::add_square(const std::string& e, const std::string& f, const std::string& fhat,
                                 const std::string& ehat) {
  for (const auto* n : {&e, &f, &fhat, &ehat}) {
    bool known = std::any_of(edges_.begin(), edges_.end(), [&](const RawEdge& r) { return r.name == *n; });
    if (!known) throw std::invalid_argument("unknown edge '" + *n + "' in square");
  }
  squares_.push_back({e, f, fhat, ehat});
}

void KGraph::Builder::mark_boundary(const std::string& v) {
  if (std::find(vertices_.begin(), vertices_.end(), v) == vertices_.end())
    throw std::invalid_argument("unknown vertex '" + v + "'");
  if (std::find(boundary_.begin(), boundary_.end(), v) == boundary_.end()) boundary_.push_back(v);
}

KGraph KGraph::Builder::build() const {
  KGraph g = build_unchecked();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (int i = 0; i < g.rank_; ++i) {
      for (int j = i + 1; j < g.rank_; ++j) {
        // pairs e f with color(e) = i, color(f) = j, r(e) = v
        for (EdgeId e : g.into_[v][i])
          for (EdgeId f : g.into_[g.edges_[e].source][j]) {
            auto n = g.forward_.count({e, f});
            if (n == 0) throw LoadError("missing square for " + g.edges_[e].name + " " + g.edges_[f].name);
            if (n > 1) throw LoadError("more than one square for " + g.edges_[e].name + " " + g.edges_[f].name);
          }
        for (EdgeId fh : g.into_[v][j])
          for (EdgeId eh : g.into_[g.edges_[fh].source][i]) {
            auto n = g.backward_.count({fh, eh});
            if (n != 1)
              throw LoadError("square table is not a bijection: " + g.edges_[fh].name + " " + g.edges_[eh].name +
                              " is the image of " + std::to_string(n) + " pairs");
          }
      }
    }
  }
  return g;
}

KGraph KGraph::Builder::build_unchecked() const {
  KGraph g;
  g.rank_ = rank_;
  g.vertices_ = vertices_;
  for (VertexId v = 0; v < vertices_.size(); ++v) g.vertex_index_[vertices_[v]] = v;
  std::vector<RawEdge> sorted = edges_;
  std::sort(sorted.begin(), sorted.end(),
            [](const RawEdge& a, const RawEdge& b) { return std::tie(a.color, a.name) < std::tie(b.color, b.name); });
  g.into_.assign(vertices_.size(), std::vector<std::vector<EdgeId>>(rank_));
  g.out_ = g.into_;
  for (const auto& r : sorted) {
    EdgeId id = static_cast<EdgeId>(g.edges_.size());
    Edge e{r.name, r.color, g.vertex_index_.at(r.range), g.vertex_index_.at(r.source)};
    g.edges_.push_back(e);
    g.edge_index_[r.name] = id;
    g.into_[e.range][e.color].push_back(id);
    g.out_[e.source][e.color].push_back(id);
  }
  std::set<std::pair<EdgeId, EdgeId>> seen;
  for (const auto& s : squares_) {
    EdgeId e = g.edge_index_.at(s[0]), f = g.edge_index_.at(s[1]);
    EdgeId fh = g.edge_index_.at(s[2]), eh = g.edge_index_.at(s[3]);
    if (g.color(e) > g.color(f)) {
      std::swap(e, fh);
      std::swap(f, eh);
    }
    const Edge &E = g.edges_[e], &F = g.edges_[f], &FH = g.edges_[fh], &EH = g.edges_[eh];
    std::string what = s[0] + " " + s[1] + " = " + s[2] + " " + s[3];
    if (E.color == F.color) throw LoadError("square " + what + " does not mix two colors");
    if (FH.color != F.color || EH.color != E.color) throw LoadError("square " + what + " does not swap colors");
    if (E.source != F.range) throw LoadError("square " + what + ": left side is not composable");
    if (FH.source != EH.range) throw LoadError("square " + what + ": right side is not composable");
    if (E.range != FH.range || F.source != EH.source)
      throw LoadError("square " + what + ": sides have different range or source");
    if (!seen.insert({e, f}).second) throw LoadError("duplicate square for " + E.name + " " + F.name);
    g.squares_.push_back({e, f, fh, eh});
    g.forward_.insert({{e, f}, {fh, eh}});
    g.backward_.insert({{fh, eh}, {e, f}});
  }
  std::sort(g.squares_.begin(), g.squares_.end(), [&](const Square& a, const Square& b) {
    return std::tie(g.edges_[a.e].name, g.edges_[a.f].name) < std::tie(g.edges_[b.e].name, g.edges_[b.f].name);
  });
  g.boundary_flag_.assign(vertices_.size(), false);
  for (const auto& b : boundary_) {
    VertexId v = g.vertex_index_.at(b);
    g.boundary_.push_back(v);
    g.boundary_flag_[v] = true;
  }
  std::sort(g.boundary_.begin(), g.boundary_.end());
  return g;
}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

}  // namespace

KGraph load_kgraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::optional<KGraph::Builder> builder;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0].text;
    auto need = [&](std::size_t n) {
      if (tok.size() != n)
        throw LoadError("'" + kw + "' expects " + std::to_string(n - 1) + " arguments", lineno, tok[0].column);
    };
    try {
      if (kw == "kgraph") {
        need(2);
        if (builder) throw LoadError("repeated header", lineno, tok[0].column);
        int k = 0;
        try {
          k = std::stoi(tok[1].text);
        } catch (const std::exception&) {
          throw LoadError("rank must be a positive integer", lineno, tok[1].column);
        }
        if (k < 1) throw LoadError("rank must be a positive integer", lineno, tok[1].column);
        builder.emplace(k);
        continue;
      }
      if (!builder) throw LoadError("missing 'kgraph <k>' header", lineno, tok[0].column);
      if (kw == "vertex") {
        need(2);
        builder->add_vertex(tok[1].text);
      } else if (kw == "edge") {
        need(5);
        int c = 0;
        try {
          c = std::stoi(tok[1].text);
        } catch (const std::exception&) {
          throw LoadError("color must be an integer", lineno, tok[1].column);
        }
        builder->add_edge(c - 1, tok[2].text, tok[3].text, tok[4].text);
      } else if (kw == "square") {
        need(6);
        if (tok[3].text != "=") throw LoadError("expected '='", lineno, tok[3].column);
        builder->add_square(tok[1].text, tok[2].text, tok[4].text, tok[5].text);
      } else if (kw == "boundary") {
        need(2);
        builder->mark_boundary(tok[1].text);
      } else {
        throw LoadError("unknown directive '" + kw + "'", lineno, tok[0].column);
      }
    } catch (const std::invalid_argument& e) {
      throw LoadError(e.what(), lineno, tok[0].column);
    }
  }
  if (!builder) throw LoadError("empty graph description");
  return builder->build();
}

KGraph load_kgraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_kgraph(ss.str());
}

std::string serialize_kgraph(const KGraph& g) {
  std::ostringstream out;
  out << "kgraph " << g.rank() << "\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << "vertex " << g.vertex_name(v) << "\n";
  for (VertexId v : g.boundary()) out << "boundary " << g.vertex_name(v) << "\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& E = g.edge(e);
    out << "edge " << E.color + 1 << " " << E.name << " " << g.vertex_name(E.range) << " "
        << g.vertex_name(E.source) << "\n";
  }
  for (const Square& s : g.squares())
    out << "square " << g.edge(s.e).name << " " << g.edge(s.f).name << " = " << g.edge(s.fhat).name << " "
        << g.edge(s.ehat).name << "\n";
  return out.str();
}

namespace {

void composable_words(const KGraph& g, VertexId v, std::size_t len, std::vector<EdgeId>& word,
                      std::vector<std::vector<EdgeId>>& out) {
  if (word.size() == len) {
    out.push_back(word);
    return;
  }
  VertexId at = word.empty() ? v : g.edge(word.back()).source;
  for (int c = 0; c < g.rank(); ++c)
    for (EdgeId e : g.edges_into(at, c)) {
      word.push_back(e);
      composable_words(g, v, len, word, out);
      word.pop_back();
    }
}

std::string word_text(const KGraph& g, const std::vector<EdgeId>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + g.edge(w[i]).name;
  return s;
}

}  // namespace

FactorizationReport validate_factorization(const KGraph& g, int depth) {
  FactorizationReport rep;
  rep.depth = depth;
  for (std::size_t len = 2; len <= static_cast<std::size_t>(depth) + 1; ++len) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::vector<std::vector<EdgeId>> words;
      std::vector<EdgeId> scratch;
      composable_words(g, v, len, scratch, words);
      rep.words_checked += words.size();
      std::set<std::vector<EdgeId>> visited;
      for (const auto& w0 : words) {
        if (visited.count(w0)) continue;
        ++rep.classes;
        std::vector<std::vector<EdgeId>> queue{w0};
        visited.insert(w0);
        std::map<std::vector<int>, std::vector<EdgeId>> by_pattern;
        for (std::size_t q = 0; q < queue.size(); ++q) {
          auto w = queue[q];
          std::vector<int> pattern;
          for (EdgeId e : w) pattern.push_back(g.color(e));
          auto [it, fresh] = by_pattern.emplace(pattern, w);
          if (!fresh && rep.witnesses.size() < 8) {
            rep.ok = false;
            rep.witnesses.push_back("words " + word_text(g, it->second) + " and " + word_text(g, w) +
                                    " are identified by the square table but share a color pattern");
          } else if (!fresh) {
            rep.ok = false;
          }
          for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (g.color(w[i]) == g.color(w[i + 1])) continue;
            auto images = g.swaps(w[i], w[i + 1]);
            if (images.empty() && rep.witnesses.size() < 8) {
              rep.ok = false;
              rep.witnesses.push_back("no square rewrites " + g.edge(w[i]).name + "." + g.edge(w[i + 1]).name);
            }
            for (auto [a, b] : images) {
              auto n = w;
              n[i] = a;
              n[i + 1] = b;
              if (visited.insert(n).second) queue.push_back(n);
            }
          }
        }
      }
    }
  }
  return rep;
}

StructuralFlags structural_flags(const KGraph& g) {
  StructuralFlags f;
  f.truncated = g.truncated();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (int c = 0; c < g.rank(); ++c) {
      std::string tag = g.vertex_name(v) + "/" + std::to_string(c + 1);
      if (g.edges_into(v, c).empty()) {
        f.source_free = false;
        f.sources.push_back(tag);
      }
      if (g.edges_out(v, c).empty()) {
        f.sink_free = false;
        f.sinks.push_back(tag);
      }
    }
  return f;
}

IntMatrix adjacency_matrix(const KGraph& g, int color) {
  IntMatrix a = IntMatrix::Zero(g.vertex_count(), g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.color(e) == color) a(g.edge(e).range, g.edge(e).source) += 1;
  return a;
}

}  // namespace kg
