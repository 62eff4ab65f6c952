#include "kgraph/formats.hpp"

#include <fstream>
#include <sstream>

namespace kg {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{n, {}};
    for (std::string w; words >> w;) line.tokens.push_back(w);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

std::string join(const std::vector<std::string>& t, std::size_t from, std::size_t to) {
  std::string s;
  for (std::size_t i = from; i < to; ++i) s += (i > from ? " " : "") + t[i];
  return s;
}

Rational rational_at(const Line& l, std::size_t i) {
  if (i >= l.tokens.size()) throw LoadError("missing number", l.number);
  try {
    return parse_rational(l.tokens[i]);
  } catch (const std::exception&) {
    throw LoadError("bad number '" + l.tokens[i] + "'", l.number);
  }
}

// "body * cycle" with an empty body meaning the range vertex of the cycle.
std::pair<FinPath, FinPath> body_cycle(const KGraph& g, const std::string& text) {
  auto star = text.find('*');
  if (star == std::string::npos) throw std::invalid_argument("expected '<body> * <cycle>'");
  FinPath cycle = parse_path(g, text.substr(star + 1));
  std::string head = text.substr(0, star);
  head.erase(0, head.find_first_not_of(' '));
  head.erase(head.find_last_not_of(' ') + 1);
  FinPath body = head.empty() ? FinPath::vertex(g, cycle.range()) : parse_path(g, head);
  return {body, cycle};
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CylMeasure load_measure(const KGraph& g, std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "measure" || lines[0].tokens.size() != 2)
    throw LoadError("expected 'measure eigen' or 'measure atomic'", lines.empty() ? 1 : lines[0].number);
  const std::string kind = lines[0].tokens[1];
  if (kind == "eigen") {
    std::vector<Rational> beta, xi(g.vertex_count());
    std::vector<bool> seen(g.vertex_count(), false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const Line& l = lines[i];
      if (l.tokens[0] == "beta") {
        for (std::size_t j = 1; j < l.tokens.size(); ++j) beta.push_back(rational_at(l, j));
      } else if (l.tokens[0] == "xi") {
        for (std::size_t j = 1; j < l.tokens.size(); ++j) {
          auto eq = l.tokens[j].find('=');
          if (eq == std::string::npos) throw LoadError("expected vertex=value", l.number);
          auto v = g.find_vertex(l.tokens[j].substr(0, eq));
          if (!v) throw LoadError("unknown vertex '" + l.tokens[j].substr(0, eq) + "'", l.number);
          try {
            xi[*v] = parse_rational(l.tokens[j].substr(eq + 1));
          } catch (const std::exception&) {
            throw LoadError("bad number in '" + l.tokens[j] + "'", l.number);
          }
          seen[*v] = true;
        }
      } else {
        throw LoadError("unknown directive '" + l.tokens[0] + "'", l.number);
      }
    }
    if (beta.size() != static_cast<std::size_t>(g.rank()))
      throw LoadError("beta needs " + std::to_string(g.rank()) + " entries");
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (!seen[v]) throw LoadError("xi has no value for vertex " + g.vertex_name(v));
    return eigen_measure(g, xi, beta);
  }
  if (kind != "atomic") throw LoadError("unknown measure kind '" + kind + "'", lines[0].number);
  std::vector<std::pair<InfPath, Rational>> atoms;
  std::vector<GeometricFamily> families;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const auto& t = l.tokens;
    try {
      if (t[0] == "atom") {
        if (t.size() < 3) throw LoadError("expected 'atom <path> <weight>'", l.number);
        atoms.emplace_back(parse_inf_path(g, join(t, 1, t.size() - 1)), rational_at(l, t.size() - 1));
      } else if (t[0] == "family") {
        std::size_t geo = 0;
        for (std::size_t j = 0; j < t.size(); ++j)
          if (t[j] == "geometric") geo = j;
        if (geo < 3 || geo + 3 != t.size())
          throw LoadError("expected 'family <stem> <body> * <cycle> geometric <ratio> <first>'", l.number);
        std::string stem = t[1];
        if (stem.size() > 2 && stem.ends_with("^n")) stem.resize(stem.size() - 2);
        auto [body, cycle] = body_cycle(g, join(t, 2, geo));
        families.push_back({parse_path(g, stem), body, cycle, rational_at(l, geo + 1), rational_at(l, geo + 2)});
      } else {
        throw LoadError("unknown directive '" + t[0] + "'", l.number);
      }
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError(e.what(), l.number);
    }
  }
  return atomic_measure(g, std::move(atoms), std::move(families));
}

CylMeasure load_measure_file(const KGraph& g, const std::string& path) { return load_measure(g, read_text_file(path)); }

SbfsFile load_sbfs(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "sbfs" || lines[0].tokens.size() != 2)
    throw LoadError("expected 'sbfs standard' or 'sbfs abstract'", lines.empty() ? 1 : lines[0].number);
  SbfsFile f;
  if (lines[0].tokens[1] == "standard") {
    f.standard = true;
    if (lines.size() > 1) throw LoadError("a standard system takes no further directives", lines[1].number);
    return f;
  }
  if (lines[0].tokens[1] != "abstract") throw LoadError("unknown system kind '" + lines[0].tokens[1] + "'", lines[0].number);
  auto arrows = [](const Line& l, std::size_t from, std::map<std::string, std::string>& out) {
    for (std::size_t j = from; j < l.tokens.size(); ++j) {
      const auto& tok = l.tokens[j];
      auto arrow = tok.find("->");
      if (arrow == std::string::npos || arrow == 0 || arrow + 2 == tok.size())
        throw LoadError("expected a->b, got '" + tok + "'", l.number);
      if (!out.emplace(tok.substr(0, arrow), tok.substr(arrow + 2)).second)
        throw LoadError("atom '" + tok.substr(0, arrow) + "' mapped twice", l.number);
    }
  };
  auto& s = f.spec;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const auto& t = l.tokens;
    if (t[0] == "domain") {
      if (t.size() < 4 || t[2] != "=") throw LoadError("expected 'domain <vertex> = <atoms>'", l.number);
      for (std::size_t j = 3; j < t.size(); ++j) {
        if (s.domain.count(t[j])) throw LoadError("atom '" + t[j] + "' listed twice", l.number);
        s.domain[t[j]] = t[1];
        s.atoms.push_back(t[j]);
      }
    } else if (t[0] == "weight") {
      if (t.size() != 3) throw LoadError("expected 'weight <atom> <value>'", l.number);
      s.weights[t[1]] = rational_at(l, 2);
    } else if (t[0] == "map") {
      if (t.size() < 2 || !t[1].ends_with(":")) throw LoadError("expected 'map <edge>: a->b ...'", l.number);
      arrows(l, 2, s.maps[t[1].substr(0, t[1].size() - 1)]);
    } else if (t[0] == "code") {
      if (t.size() < 2) throw LoadError("expected 'code <color> a->b ...'", l.number);
      int c = 0;
      try {
        c = std::stoi(t[1]);
      } catch (const std::exception&) {
        throw LoadError("bad color '" + t[1] + "'", l.number);
      }
      if (c < 1) throw LoadError("colors start at 1", l.number);
      arrows(l, 2, s.coding[c - 1]);
    } else {
      throw LoadError("unknown directive '" + t[0] + "'", l.number);
    }
  }
  for (const auto& [atom, w] : s.weights)
    if (!s.domain.count(atom)) throw LoadError("weight for unknown atom '" + atom + "'");
  return f;
}

SbfsFile load_sbfs_file(const std::string& path) { return load_sbfs(read_text_file(path)); }

}  // namespace kg
