#include "kgraph/report.hpp"

namespace kg {

Json to_json(const KGraph& g) {
  Json j;
  j["rank"] = g.rank();
  j["vertices"] = g.vertex_count();
  j["edges"] = g.edge_count();
  Json by_color = Json::array();
  for (int c = 0; c < g.rank(); ++c) {
    std::size_t n = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) n += g.color(e) == c;
    by_color.push_back(n);
  }
  j["edges_by_color"] = by_color;
  j["squares"] = g.squares().size();
  auto flags = structural_flags(g);
  j["source_free"] = flags.source_free;
  j["sink_free"] = flags.sink_free;
  j["sources"] = flags.sources;
  j["sinks"] = flags.sinks;
  j["truncated"] = flags.truncated;
  Json bnd = Json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.is_boundary(v)) bnd.push_back(g.vertex_name(v));
  j["boundary"] = bnd;
  Json adj = Json::array();
  for (int c = 0; c < g.rank(); ++c) adj.push_back(to_json(adjacency_matrix(g, c)));
  j["adjacency"] = adj;
  return j;
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const FactorizationReport& r) {
  return {{"verdict", r.ok ? "valid" : "invalid"},
          {"depth", r.depth},
          {"words_checked", r.words_checked},
          {"classes", r.classes},
          {"witnesses", r.witnesses}};
}

Json to_json(const KGraph& g, const CofinalityResult& r) {
  Json j;
  j["verdict"] = !r.applicable ? "not applicable" : (r.cofinal ? "cofinal" : "not cofinal");
  j["cofinal"] = r.cofinal;
  j["applicable"] = r.applicable;
  if (!r.note.empty()) j["evidence"] = r.note;
  Json w = Json::object();
  if (r.witness_vertex) w["vertex"] = g.vertex_name(*r.witness_vertex);
  if (r.witness_path) w["path"] = render(g, *r.witness_path);
  j["witnesses"] = w;
  return j;
}

Json to_json(const KGraph& g, const PeriodicityReport& r) {
  Json j;
  j["depth"] = r.depth;
  Json pairs = Json::array();
  for (const auto& p : r.pairs) pairs.push_back({render(g, p.lambda), render(g, p.nu)});
  j["pairs"] = pairs;
  j["pair_count"] = r.pairs.size();
  j["per_group_basis"] = r.per_group;
  std::string group;
  if (r.per_group.empty()) {
    group = "0";
  } else if (r.per_group.size() == static_cast<std::size_t>(g.rank())) {
    bool unit = true;
    for (std::size_t i = 0; i < r.per_group.size(); ++i)
      for (std::size_t c = 0; c < r.per_group[i].size(); ++c)
        if (r.per_group[i][c] != (i == c ? 1 : 0) && r.per_group[i][c] != (i == c ? -1 : 0)) unit = false;
    group = unit ? (g.rank() == 1 ? "Z" : "Z^" + std::to_string(g.rank())) : "rank " + std::to_string(g.rank());
  } else {
    group = "rank " + std::to_string(r.per_group.size());
  }
  j["per_group"] = group;
  Json h = Json::array();
  for (VertexId v : r.h_per) h.push_back(g.vertex_name(v));
  j["h_per"] = h;
  return j;
}

Json to_json(const SbfsReport& r) {
  Json j;
  j["verdict"] = r.passed ? "valid" : "invalid";
  Json c;
  for (auto [k, v] : r.conditions) c[std::string(1, k)] = v;
  j["conditions"] = c;
  Json f = Json::array();
  for (const auto& x : r.failures) f.push_back(std::string(1, x.condition) + ": " + x.message);
  j["evidence"] = f;
  j["interior_atoms"] = r.interior_atoms;
  j["degree_budget"] = r.n_max;
  return j;
}

Json to_json(const ProjectiveReport& r) {
  return {{"verdict", r.passed ? "valid" : "invalid"},
          {"condition_a", r.condition_a},
          {"condition_b", r.condition_b},
          {"exact", r.exact},
          {"evidence", r.failures}};
}

Json to_json(const CkReport& r) {
  Json j;
  j["verdict"] = r.passed ? "holds" : "fails";
  j["exact"] = r.exact;
  j["degree_budget"] = r.n_max;
  j["interior_atoms"] = r.interior_atoms;
  Json checks = Json::object();
  for (const auto& [k, v] : r.checks) checks[k] = v;
  j["checks"] = checks;
  Json failed = Json::object();
  for (const auto& [k, v] : r.failures_by_relation) failed[k] = v;
  j["failures"] = failed;
  Json ev = Json::array();
  for (const auto& f : r.failures) ev.push_back(f.relation + ": " + f.detail);
  j["evidence"] = ev;
  return j;
}

Json to_json(const MonicityReport& r, const Sbfs& s) {
  Json j;
  j["verdict"] = r.monic ? "monic" : "not monic";
  j["phi_injective"] = r.phi_injective;
  j["phi_determined"] = r.phi_determined;
  Json col = Json::array();
  for (const auto& [a, b] : r.collisions) col.push_back({a, b});
  Json w;
  w["collisions"] = col;
  j["screens"] = Json::array();
  if (r.unique_path_vertex) j["screens"].push_back("unique-path vertex " + *r.unique_path_vertex);
  for (const auto& c : r.cycles_without_entrance) j["screens"].push_back("cycle without entrance " + c);
  j["witnesses"] = w;
  if (r.monic) {
    Json xi = Json::object();
    for (AtomId x = 0; x < s.size(); ++x) xi[s.names[x]] = r.monic_vector[x];
    j["monic_vector"] = xi;
  }
  j["span_check"] = {{"depth", r.span_depth}, {"rank", r.span_rank}, {"atoms", s.size()},
                     {"full_rank", r.span_full_rank}};
  j["inconsistent"] = r.inconsistent;
  return j;
}

Json to_json(const IrreducibilityReport& r) {
  Json j;
  j["verdict"] = r.verdict;
  j["evidence"] = r.evidence;
  j["cofinal"] = r.cofinal;
  j["cofinality_applicable"] = r.cofinality_applicable;
  j["meets_every_domain"] = r.meets_every_domain;
  j["jointly_ergodic"] = r.jointly_ergodic;
  j["components"] = r.components.size();
  j["monic"] = r.monic;
  j["periodic_screen"] = r.periodic_screen;
  if (!r.character.empty()) j["character"] = r.character;
  j["commutant_dim"] = r.commutant_dim;
  j["commutant_fully_interior"] = r.commutant_fully_interior;
  if (r.commutant_diagonal) j["commutant_diagonal"] = *r.commutant_diagonal;
  j["phi_components"] = r.phi_components;
  j["witnesses"] = {{"components", r.components}};
  j["truncation"] = r.truncation;
  j["inconsistent"] = r.inconsistent;
  return j;
}

Json to_json(const DisjointnessReport& r) {
  Json j;
  j["verdict"] = !r.disjoint ? "inconclusive" : (*r.disjoint ? "disjoint" : "not disjoint");
  j["mutually_singular"] = r.mutually_singular;
  j["direction"] = r.direction;
  j["intertwiner_dim"] = r.intertwiner_dim;
  j["fully_interior"] = r.fully_interior;
  j["witnesses"] = Json::object();
  if (r.shared_atom) j["witnesses"]["shared_atom"] = *r.shared_atom;
  j["inconsistent"] = r.inconsistent;
  return j;
}

Json to_json(const KGraph& g, const AtomicClassification& r, const Sbfs& s) {
  Json j;
  j["verdict"] = r.monic ? "monic" : "not monic";
  Json fibers = Json::array();
  for (const auto& [gamma, xs] : r.fibers) {
    Json names = Json::array();
    for (AtomId x : xs) names.push_back(s.names[x]);
    fibers.push_back({{"point", render(g, gamma)}, {"dimension", xs.size()}, {"atoms", names}});
  }
  j["fibers"] = fibers;
  j["orbit_classes"] = r.orbit_classes;
  j["consistent"] = r.consistent;
  return j;
}

}  // namespace kg
