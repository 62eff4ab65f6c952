#include "kgraph/catalog.hpp"

#include <algorithm>
#include <sstream>

namespace kg {

namespace {

std::shared_ptr<const KGraph> graph_of(std::string_view text) { return std::make_shared<KGraph>(load_kgraph(text)); }

SystemSpec standard(const std::string& label, const CylMeasure& mu, std::optional<std::string> restrict_to = {}) {
  SystemSpec s;
  s.label = label;
  s.measure = mu;
  s.restrict_to = std::move(restrict_to);
  return s;
}

SystemSpec abstract(const std::string& label, const AbstractSpec& spec) {
  SystemSpec s;
  s.label = label;
  s.abstract = spec;
  return s;
}

PipelineConfig config(std::shared_ptr<const KGraph> g, const CatalogOptions& opt, std::vector<std::string> analyses) {
  PipelineConfig c;
  c.graph = std::move(g);
  c.truncation = opt.truncation;
  c.analyses = std::move(analyses);
  return c;
}

std::string irr(int i) { return "/systems/" + std::to_string(i) + "/irreducible"; }
std::string mon(int i) { return "/systems/" + std::to_string(i) + "/monic"; }

CatalogEntry seal(const CatalogOptions& opt) {
  CatalogEntry e{"seal", "one vertex, one loop; abstract system on {0, 1} where the loop swaps the points", {}, {}};
  e.graph = graph_of("kgraph 1\nvertex v\nedge 1 e v v\n");
  auto spec = load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1 1->0\n").spec;
  CatalogRun r{"swap", config(e.graph, opt, {"sbfs-check", "ck-check", "monic", "irreducible", "atomic"}), {}};
  r.config.systems.push_back(abstract("swap", spec));
  r.findings = {{"/systems/0/sbfs-check/verdict", "valid"},
                {"/systems/0/ck-check/verdict", "holds"},
                {mon(0) + "/verdict", "not monic"},
                {mon(0) + "/phi_injective", false},
                {mon(0) + "/screens", "unique-path vertex v", true},
                {irr(0) + "/verdict", "reducible"},
                {irr(0) + "/jointly_ergodic", true},
                {irr(0) + "/commutant_dim", 2},
                {"/systems/0/atomic/fibers/0/dimension", 2}};
  e.runs.push_back(std::move(r));
  return e;
}

const char* kCkssGraph = "kgraph 1\nvertex v1\nvertex v2\nedge 1 e v1 v1\nedge 1 g v1 v2\nedge 1 f v2 v2\n";

CatalogEntry periodic_not_coding(const CatalogOptions& opt) {
  CatalogEntry e{"ex:periodic-but-not-coding", "loops e at v1 and f at v2 joined by g; graph only", {}, {}};
  e.graph = graph_of(kCkssGraph);
  CatalogRun r{"graph", config(e.graph, opt, {"validate", "cofinal", "periodicity"}), {}};
  r.findings = {{"/validate/verdict", "valid"},
                {"/periodicity/per_group", "Z"},
                {"/periodicity/h_per", Json::array({"v2"})},
                {"/periodicity/pairs", Json::array({"v2", "f"}), true},
                {"/periodicity/pairs", Json::array({"g", "g.f"}), true}};
  e.runs.push_back(std::move(r));
  return e;
}

CylMeasure ckss_measure(const KGraph& g) {
  return load_measure(g,
                      "measure atomic\n"
                      "atom * e 1/4\n"
                      "atom * f 1/4\n"
                      "family e g * f geometric 1/2 1/4\n");
}

CatalogEntry ckss(const CatalogOptions& opt) {
  CatalogEntry e{"ex:CKSS", "the e, g, f graph with atoms at e^inf, f^inf and e^n g f^inf", {}, {}};
  e.graph = graph_of(kCkssGraph);
  auto mu = ckss_measure(*e.graph);
  CatalogRun full{"full", config(e.graph, opt, {"cofinal", "measure", "sbfs-check", "ck-check", "monic", "irreducible",
                                                "atomic"}),
                  {}};
  full.config.systems.push_back(standard("full", mu));
  full.findings = {{"/cofinal/cofinal", false},
                   {"/cofinal/witnesses/vertex", "v2"},
                   {"/cofinal/witnesses/path", "v1 * e"},
                   {"/measure/cylinder_masses/f", "1/4"},
                   {"/measure/cylinder_masses/e.g", "1/8"},
                   {"/measure/cylinder_masses/e", "1/2"},
                   {"/measure/cylinder_masses/e.e", "3/8"},
                   {"/measure/additivity/holds", true},
                   {"/systems/0/sbfs-check/verdict", "valid"},
                   {"/systems/0/ck-check/verdict", "holds"},
                   {mon(0) + "/verdict", "monic"},
                   {mon(0) + "/span_check/full_rank", true},
                   {irr(0) + "/verdict", "reducible"},
                   {irr(0) + "/components", 2},
                   {irr(0) + "/witnesses/components", Json::array({"v1 * e"}), true},
                   {irr(0) + "/commutant_dim", 2},
                   {"/systems/0/atomic/verdict", "monic"}};
  e.runs.push_back(std::move(full));
  // the two invariant pieces as separate systems
  CatalogRun split{"components", config(e.graph, opt, {"irreducible", "disjoint"}), {}};
  split.config.systems.push_back(standard("e-loop", mu, "v1 * e"));
  split.config.systems.push_back(standard("rest", mu, "v2 * f"));
  split.findings = {{irr(0) + "/verdict", "irreducible"},
                    {irr(1) + "/verdict", "irreducible"},
                    {"/disjoint/mutually_singular", true},
                    {"/disjoint/verdict", "disjoint"}};
  e.runs.push_back(std::move(split));
  return e;
}

CatalogEntry not_cofinal(const CatalogOptions& opt) {
  CatalogEntry e{"ex:not-cofinal-but-irred", "loops e, f, k at v, w, u with g: w -> v and h: u -> v", {}, {}};
  e.graph = graph_of(
      "kgraph 1\nvertex v\nvertex w\nvertex u\n"
      "edge 1 e v v\nedge 1 g v w\nedge 1 h v u\nedge 1 f w w\nedge 1 k u u\n");
  auto mu = load_measure(*e.graph,
                         "measure atomic\n"
                         "atom * f 1/4\n"
                         "atom * k 1/4\n"
                         "family e g * f geometric 1/2 1/8\n"
                         "family e h * k geometric 1/2 1/8\n");
  CatalogRun full{"full", config(e.graph, opt, {"cofinal", "measure", "sbfs-check", "ck-check", "irreducible"}), {}};
  full.config.systems.push_back(standard("full", mu));
  full.findings = {{"/cofinal/cofinal", false},
                   {"/cofinal/witnesses/vertex", "w"},
                   {"/cofinal/witnesses/path", "u * k"},
                   {"/measure/cylinder_masses/e", "1/4"},
                   {"/measure/cylinder_masses/e.g", "1/16"},
                   {"/measure/additivity/holds", true},
                   {"/systems/0/ck-check/verdict", "holds"},
                   {irr(0) + "/verdict", "reducible"}};
  e.runs.push_back(std::move(full));
  CatalogRun restricted{"E", config(e.graph, opt, {"sbfs-check", "ck-check", "monic", "irreducible", "skeleton"}), {}};
  restricted.config.systems.push_back(standard("E", mu, "w * f"));
  restricted.config.step = {2};
  restricted.findings = {{"/systems/0/ck-check/verdict", "holds"},
                         {irr(0) + "/verdict", "irreducible"},
                         {irr(0) + "/meets_every_domain", false},
                         {irr(0) + "/commutant_dim", 1},
                         {"/skeleton/adjacency_matches", true},
                         {"/skeleton/transfer/0/implication_holds", true}};
  e.runs.push_back(std::move(restricted));
  return e;
}

// e_i: v_i -> v_{i-1}, f_1: w_1 -> v_0, f_i: w_i -> w_{i-1}; loops a at v_N and b at w_N close the tails.
std::shared_ptr<const KGraph> chuva_graph(int n) {
  std::ostringstream s;
  s << "kgraph 1\n";
  for (int i = 0; i <= n; ++i) s << "vertex v" << i << "\n";
  for (int i = 1; i <= n; ++i) s << "vertex w" << i << "\n";
  for (int i = 1; i <= n; ++i) s << "edge 1 e" << i << " v" << i - 1 << " v" << i << "\n";
  s << "edge 1 f1 v0 w1\n";
  for (int i = 2; i <= n; ++i) s << "edge 1 f" << i << " w" << i - 1 << " w" << i << "\n";
  s << "edge 1 a v" << n << " v" << n << "\nedge 1 b w" << n << " w" << n << "\n";
  return graph_of(s.str());
}

CatalogEntry chuva(const CatalogOptions& opt) {
  const int n = std::max(1, opt.chuva_depth);
  CatalogEntry e{"chuva", "two rays into v0 capped by loops at depth " + std::to_string(n) + "; counting measure", {}, {}};
  e.graph = chuva_graph(n);
  const KGraph& g = *e.graph;
  std::ostringstream m;
  m << "measure atomic\n";
  for (int i = 0; i <= n; ++i) {
    m << "atom ";
    for (int j = i + 1; j <= n; ++j) m << "e" << j << (j < n ? "." : "");
    m << " * a 1\n";
  }
  m << "atom f1";
  for (int j = 2; j <= n; ++j) m << ".f" << j;
  m << " * b 1\n";
  for (int i = 1; i <= n; ++i) {
    m << "atom ";
    for (int j = i + 1; j <= n; ++j) m << "f" << j << (j < n ? "." : "");
    m << " * b 1\n";
  }
  auto mu = load_measure(g, m.str());
  std::string q = "v" + std::to_string(n) + " * a";
  std::string q2 = "w" + std::to_string(n) + " * b";
  CatalogRun full{"full", config(e.graph, opt, {"cofinal", "sbfs-check", "ck-check", "monic", "irreducible"}), {}};
  full.config.systems.push_back(standard("full", mu));
  full.findings = {{"/cofinal/cofinal", false},
                   {"/systems/0/sbfs-check/verdict", "valid"},
                   {"/systems/0/ck-check/verdict", "holds"},
                   {mon(0) + "/verdict", "monic"},
                   {mon(0) + "/span_check/full_rank", true},
                   {irr(0) + "/verdict", "reducible"},
                   {irr(0) + "/components", 2},
                   {irr(0) + "/commutant_dim", 2},
                   {irr(0) + "/commutant_fully_interior", true}};
  e.runs.push_back(std::move(full));
  CatalogRun orbits{"orbits", config(e.graph, opt, {"ck-check", "monic", "irreducible", "atomic", "disjoint"}), {}};
  orbits.config.systems.push_back(standard("orbit p", mu, q));
  orbits.config.systems.push_back(standard("orbit q", mu, q2));
  orbits.findings = {{"/systems/0/ck-check/verdict", "holds"},
                     {irr(0) + "/verdict", "irreducible"},
                     {irr(0) + "/commutant_dim", 1},
                     {irr(1) + "/verdict", "irreducible"},
                     {irr(1) + "/commutant_dim", 1},
                     {"/systems/0/atomic/orbit_classes", 1},
                     {"/systems/0/atomic/fibers/0/dimension", 1},
                     {"/disjoint/verdict", "disjoint"},
                     {"/disjoint/intertwiner_dim", 0}};
  e.runs.push_back(std::move(orbits));
  return e;
}

const int kA1[4][4] = {{1, 0, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 1, 0}};
const int kA2[4][4] = {{1, 0, 1, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 1, 0, 1}};

// Blocks 0..L-1 of the Ledrappier chain: block-internal edges copy A1, A2; each pair of neighbouring
// blocks is joined by one edge of each color per vertex type in both directions.
KGraph ledrappier(int blocks, bool mark_last) {
  std::vector<std::string> vs;
  std::vector<RawEdge2> es;
  auto vn = [](int b, int m) { return "x" + std::to_string(b) + "_" + std::to_string(m); };
  for (int b = 0; b < blocks; ++b)
    for (int m = 0; m < 4; ++m) vs.push_back(vn(b, m));
  for (int b = 0; b < blocks; ++b)
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          if ((c == 0 ? kA1 : kA2)[r][s])
            es.push_back({std::string(c == 0 ? "a" : "b") + std::to_string(b) + "_" + std::to_string(r) +
                              std::to_string(s),
                          c, vn(b, r), vn(b, s), "inner"});
  for (int b = 0; b + 1 < blocks; ++b)
    for (int c = 0; c < 2; ++c)
      for (int m = 0; m < 4; ++m) {
        std::string col = c == 0 ? "p" : "q";
        es.push_back({col + std::to_string(b) + "u" + std::to_string(m), c, vn(b, m), vn(b + 1, m), "link"});
        es.push_back({col + std::to_string(b) + "d" + std::to_string(m), c, vn(b + 1, m), vn(b, m), "link"});
      }
  std::vector<std::string> bnd;
  if (mark_last && blocks > 1)
    for (int m = 0; m < 4; ++m) bnd.push_back(vn(blocks - 1, m));
  return assemble_2graph(vs, es, bnd);
}

CatalogEntry ledrappier_block(const CatalogOptions& opt) {
  CatalogEntry e{"ledrappier-block", "the Ledrappier 2-graph on four vertices", {}, {}};
  e.graph = std::make_shared<KGraph>(ledrappier(1, false));
  std::string xi = "xi";
  for (int m = 0; m < 4; ++m) xi += " x0_" + std::to_string(m) + "=1";
  auto mu = load_measure(*e.graph, "measure eigen\nbeta 2 2\n" + xi + "\n");
  CatalogRun r{"eigen", config(e.graph, opt, {"validate", "info", "cofinal", "measure", "skeleton"}), {}};
  r.config.measure = mu;
  r.config.degree = {2, 2};
  r.config.step = {1, 1};
  r.findings = {{"/validate/verdict", "valid"},
                {"/cofinal/cofinal", true},
                {"/measure/verdict", "additive"},
                {"/measure/additivity/holds", true},
                {"/measure/additivity/truncation_limited", false},
                {"/skeleton/adjacency_matches", true},
                {"/skeleton/row_sums", Json::array({4, 4, 4, 4})}};
  e.runs.push_back(std::move(r));
  return e;
}

CatalogEntry ledrappier_chain(const CatalogOptions& opt) {
  const int blocks = std::max(2, opt.chain_blocks);
  CatalogEntry e{"ledrappier-chain",
                 "first " + std::to_string(blocks) + " blocks of the Ledrappier chain; the last block is a boundary", {}, {}};
  e.graph = std::make_shared<KGraph>(ledrappier(blocks, true));
  std::string xi = "xi";
  for (int b = 0; b < blocks; ++b)
    for (int m = 0; m < 4; ++m) xi += " x" + std::to_string(b) + "_" + std::to_string(m) + "=" + std::to_string(b + 1);
  auto mu = load_measure(*e.graph, "measure eigen\nbeta 4 4\n" + xi + "\n");
  CatalogRun r{"eigen", config(e.graph, opt, {"validate", "info", "measure"}), {}};
  r.config.measure = mu;
  r.config.degree = {2, 2};
  r.findings = {{"/validate/verdict", "valid"},
                {"/info/truncated", true},
                {"/measure/beta", Json::array({"4", "4"})},
                {"/measure/additivity/holds", true}};
  e.runs.push_back(std::move(r));
  return e;
}

CatalogEntry bouquet(const CatalogOptions& opt) {
  CatalogEntry e{"bouquet-3", "one vertex with three loops", {}, {}};
  e.graph = graph_of("kgraph 1\nvertex v\nedge 1 a v v\nedge 1 b v v\nedge 1 c v v\n");
  CatalogRun r{"graph", config(e.graph, opt, {"validate", "cofinal", "periodicity", "measure"}), {}};
  r.config.measure = load_measure(*e.graph, "measure eigen\nbeta 3\nxi v=1\n");
  r.findings = {{"/cofinal/cofinal", true},
                {"/periodicity/per_group", "0"},
                {"/measure/cylinder_masses/a.b", "1/9"},
                {"/measure/additivity/holds", true}};
  e.runs.push_back(std::move(r));
  return e;
}

CatalogEntry omega(const CatalogOptions& opt) {
  CatalogEntry e{"omega-2", "one vertex with one loop of each of two colors", {}, {}};
  e.graph = graph_of("kgraph 2\nvertex v\nedge 1 a v v\nedge 2 b v v\nsquare a b = b a\n");
  CatalogRun r{"graph", config(e.graph, opt, {"validate", "cofinal", "periodicity", "measure"}), {}};
  r.config.measure = load_measure(*e.graph, "measure eigen\nbeta 1 1\nxi v=1\n");
  r.findings = {{"/validate/verdict", "valid"},
                {"/cofinal/cofinal", true},
                {"/periodicity/per_group", "Z^2"},
                {"/periodicity/h_per", Json::array({"v"})},
                {"/measure/additivity/holds", true}};
  e.runs.push_back(std::move(r));
  return e;
}

CatalogEntry swap_pair(const CatalogOptions& opt) {
  CatalogEntry e{"swap-pair",
                 "two vertices exchanged by e1, e2; two systems carried by disjoint halves of {1, 2, 3, 4}", {}, {}};
  e.graph = graph_of("kgraph 1\nvertex v1\nvertex v2\nedge 1 e1 v2 v1\nedge 1 e2 v1 v2\n");
  const char* base = "sbfs abstract\ndomain v2 = 1 2\ndomain v1 = 3 4\nmap e1: 3->1 4->2\nmap e2: 1->3 2->4\n";
  auto odd = load_sbfs(std::string(base) + "weight 2 0\nweight 4 0\n").spec;
  auto even = load_sbfs(std::string(base) + "weight 1 0\nweight 3 0\n").spec;
  CatalogRun r{"pair", config(e.graph, opt, {"sbfs-check", "ck-check", "irreducible", "disjoint"}), {}};
  r.config.systems.push_back(abstract("odd", odd));
  r.config.systems.push_back(abstract("even", even));
  r.findings = {{"/systems/0/sbfs-check/verdict", "valid"},
                {"/systems/1/ck-check/verdict", "holds"},
                {"/disjoint/mutually_singular", true},
                {"/disjoint/direction", "one-directional"},
                {"/disjoint/intertwiner_dim", 1},
                {"/disjoint/verdict", "not disjoint"}};
  e.runs.push_back(std::move(r));
  return e;
}

using Maker = CatalogEntry (*)(const CatalogOptions&);

const std::vector<std::pair<std::string, Maker>>& makers() {
  static const std::vector<std::pair<std::string, Maker>> m{
      {"seal", seal},
      {"ex:periodic-but-not-coding", periodic_not_coding},
      {"ex:CKSS", ckss},
      {"ex:not-cofinal-but-irred", not_cofinal},
      {"chuva", chuva},
      {"ledrappier-block", ledrappier_block},
      {"ledrappier-chain", ledrappier_chain},
      {"bouquet-3", bouquet},
      {"omega-2", omega},
      {"swap-pair", swap_pair}};
  return m;
}

}  // namespace

KGraph assemble_2graph(const std::vector<std::string>& vertices, const std::vector<RawEdge2>& edges,
                       const std::vector<std::string>& boundary) {
  KGraph::Builder b(2);
  for (const auto& v : vertices) b.add_vertex(v);
  for (const auto& e : edges) b.add_edge(e.color, e.name, e.range, e.source);
  for (const auto& v : boundary) b.mark_boundary(v);
  // Key of a two-edge path: which of its edges is a block-internal one, and through which vertex
  // a path of two links passes. Squares pair paths with equal keys.
  auto key = [&](const RawEdge2& x, const RawEdge2& y) {
    if (x.tag == "inner" && y.tag == "inner") return std::string("II");
    if (x.tag == "inner") return "I" + std::to_string(x.color);
    if (y.tag == "inner") return "I" + std::to_string(y.color);
    return "L" + x.source;
  };
  std::map<std::string, std::vector<std::size_t>> into[2];
  for (std::size_t i = 0; i < edges.size(); ++i) into[edges[i].color][edges[i].range].push_back(i);
  using Block = std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>>;
  std::map<std::pair<std::string, std::string>, Block> fwd, bwd;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& x = edges[i];
    int other = 1 - x.color;
    for (std::size_t j : into[other][x.source]) {
      const auto& y = edges[j];
      auto& block = (x.color == 0 ? fwd : bwd)[{x.range, y.source}];
      block[key(x, y)].emplace_back(i, j);
    }
  }
  for (auto& [rs, blk] : fwd) {
    auto& back = bwd[rs];
    for (auto& [k, list] : blk) {
      auto& other = back[k];
      if (list.size() != other.size())
        throw std::invalid_argument("cannot pair squares from " + rs.second + " to " + rs.first);
      for (std::size_t t = 0; t < list.size(); ++t)
        b.add_square(edges[list[t].first].name, edges[list[t].second].name, edges[other[t].first].name,
                     edges[other[t].second].name);
    }
  }
  return b.build();
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, m] : makers()) n.push_back(k);
    return n;
  }();
  return names;
}

CatalogEntry builtin_example(const std::string& name, const CatalogOptions& opt) {
  for (const auto& [k, m] : makers())
    if (k == name) return m(opt);
  std::string list;
  for (const auto& n : catalog_names()) list += (list.empty() ? "" : ", ") + n;
  throw std::out_of_range("unknown example '" + name + "'; known: " + list);
}

EntryCheck check_entry(const CatalogEntry& e) {
  EntryCheck out;
  for (const auto& run : e.runs) {
    Json bundle = run_pipeline(run.config);
    if (has_inconsistency(bundle)) out.inconsistent = true;
    for (const auto& f : run.findings) {
      FindingResult r{run.name, f.pointer, f.expected, nullptr, false};
      Json::json_pointer ptr(f.pointer);
      if (bundle.contains(ptr)) {
        r.actual = bundle.at(ptr);
        if (f.contains)
          r.passed = r.actual.is_array() && std::find(r.actual.begin(), r.actual.end(), f.expected) != r.actual.end();
        else
          r.passed = r.actual == f.expected;
      }
      if (!r.passed) out.passed = false;
      out.findings.push_back(std::move(r));
    }
    out.bundles.emplace_back(run.name, std::move(bundle));
  }
  if (out.inconsistent) out.passed = false;
  return out;
}

}  // namespace kg
