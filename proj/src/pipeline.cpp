#include "kgraph/pipeline.hpp"

#include <algorithm>

namespace kg {

namespace {

Degree budget(const PipelineConfig& cfg, const std::vector<int>& v, int fallback) {
  const auto k = static_cast<std::size_t>(cfg.graph->rank());
  if (v.empty()) return Degree::diagonal(k, fallback);
  if (v.size() != k) throw PipelineError("expected " + std::to_string(k) + " entries, got " + std::to_string(v.size()));
  for (int x : v)
    if (x < 0) throw PipelineError("budgets must be non-negative");
  return Degree(v);
}

bool wants(const PipelineConfig& cfg, const std::string& a) {
  return std::find(cfg.analyses.begin(), cfg.analyses.end(), a) != cfg.analyses.end();
}

std::shared_ptr<const ProjectiveSystem> build_system(const PipelineConfig& cfg, const SystemSpec& spec) {
  std::shared_ptr<Sbfs> s;
  if (spec.abstract) {
    s = std::make_shared<Sbfs>(abstract_sbfs(cfg.graph, *spec.abstract));
  } else if (spec.measure) {
    if (spec.measure->is_eigen())
      throw PipelineError("system '" + spec.label + "': a standard system needs an atomic measure");
    s = std::make_shared<Sbfs>(standard_sbfs(cfg.graph, spec.measure->atomic(), cfg.truncation));
  } else {
    throw PipelineError("system '" + spec.label + "' has neither a measure nor an abstract description");
  }
  if (spec.restrict_to) {
    auto a = s->find(*spec.restrict_to);
    if (!a) {
      // accept any spelling of an infinite path on standard systems
      if (s->kind == SbfsKind::standard) {
        try {
          a = s->find(render(*cfg.graph, parse_inf_path(*cfg.graph, *spec.restrict_to)));
        } catch (const std::exception&) {
        }
      }
      if (!a) throw PipelineError("restriction atom '" + *spec.restrict_to + "' is not in the carrier");
    }
    for (const auto& c : coding_components(*s))
      if (std::find(c.begin(), c.end(), *a) != c.end()) {
        s = std::make_shared<Sbfs>(restrict_sbfs(*s, c, false));
        break;
      }
  }
  return std::make_shared<ProjectiveSystem>(standard_projective(s));
}

Json measure_report(const PipelineConfig& cfg, const CylMeasure& mu, const Degree& deg) {
  const KGraph& g = *cfg.graph;
  Json j;
  j["kind"] = mu.is_eigen() ? "eigen" : "atomic";
  if (mu.is_eigen()) {
    Json beta = Json::array();
    for (const auto& b : mu.eigen().beta) beta.push_back(to_string(b));
    j["beta"] = beta;
  } else {
    j["total_mass"] = to_string(mu.atomic().total_mass());
  }
  Json masses = Json::object();
  auto paths = enumerate_paths_upto(g, deg);
  for (const auto& p : paths) masses[render(g, p)] = to_string(mu.mass(g, p));
  j["cylinder_masses"] = masses;
  bool holds = true, limited = false;
  int checked = 0, partitions = 0;
  Json witnesses = Json::array();
  Degree m = Degree::diagonal(static_cast<std::size_t>(g.rank()), 2);
  std::uint64_t seed = 1;
  for (const auto& p : paths) {
    for_each_degree(m, [&](const Degree& mm) {
      auto r = check_additivity(g, mu, p, mm, 0, seed);
      ++checked;
      if (!r.holds) {
        if (r.truncation_limited) limited = true;
        else holds = false;
        if (witnesses.size() < 8) witnesses.push_back(r.witness);
      }
    });
  }
  for (int i = 0; i < cfg.random_partitions && !paths.empty(); ++i) {
    const auto& p = paths[static_cast<std::size_t>(i) % paths.size()];
    auto r = check_additivity(g, mu, p, Degree::diagonal(static_cast<std::size_t>(g.rank()), 0), 1, seed + i);
    partitions += r.partitions_checked;
    if (!r.holds) {
      if (r.truncation_limited) limited = true;
      else holds = false;
      if (witnesses.size() < 8) witnesses.push_back(r.witness);
    }
  }
  j["verdict"] = holds ? (limited ? "additive (truncation-limited)" : "additive") : "not additive";
  j["additivity"] = {{"holds", holds}, {"truncation_limited", limited}, {"identities_checked", checked},
                     {"random_partitions", partitions}};
  j["witnesses"] = witnesses;
  j["truncation"] = cfg.truncation;
  return j;
}

Json skeleton_report(const PipelineConfig& cfg, const std::vector<std::shared_ptr<const ProjectiveSystem>>& systems) {
  const KGraph& g = *cfg.graph;
  Degree step = budget(cfg, cfg.step, 1);
  auto sk = skeleton(g, step);
  Json j;
  j["step"] = step.coords();
  j["vertices"] = sk.graph->vertex_count();
  j["edges"] = sk.graph->edge_count();
  j["adjacency"] = to_json(adjacency_matrix(*sk.graph, 0));
  j["adjacency_matches"] = sk.adjacency_matches;
  Json sums = Json::array();
  IntMatrix a = adjacency_matrix(*sk.graph, 0);
  for (Eigen::Index r = 0; r < a.rows(); ++r) sums.push_back(a.row(r).sum());
  j["row_sums"] = sums;
  bool identity = g.rank() == 1 && step[0] == 1;
  j["identity"] = identity;
  Json transfers = Json::array();
  for (const auto& p : systems) {
    const Sbfs& s = p->sbfs();
    if (s.kind != SbfsKind::standard) continue;
    auto t = transfer(g, sk, s.labels);
    transfers.push_back({{"skeleton_components", t.skeleton_components},
                         {"graph_components", t.graph_components},
                         {"implication_holds", t.implication_holds}});
  }
  j["transfer"] = transfers;
  j["verdict"] = sk.adjacency_matches ? "consistent" : "inconsistent";
  j["inconsistent"] = !sk.adjacency_matches;
  for (const auto& t : transfers)
    if (!t["implication_holds"].get<bool>()) j["inconsistent"] = true;
  return j;
}

template <class F>
auto guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& known_analyses() {
  static const std::vector<std::string> names{"validate", "info",       "cofinal",  "periodicity",
                                              "measure",  "sbfs-check", "ck-check", "monic",
                                              "irreducible", "atomic",  "disjoint", "skeleton"};
  return names;
}

std::vector<std::shared_ptr<const ProjectiveSystem>> build_systems(const PipelineConfig& cfg) {
  std::vector<std::shared_ptr<const ProjectiveSystem>> out;
  for (const auto& s : cfg.systems) out.push_back(build_system(cfg, s));
  return out;
}

Json run_pipeline(const PipelineConfig& cfg) {
  if (!cfg.graph) throw PipelineError("no graph given");
  if (cfg.truncation <= 0) throw PipelineError("truncation must be positive");
  if (!(cfg.tol > 0 && cfg.tol <= 1e-3)) throw PipelineError("tolerance must lie in (0, 1e-3]");
  for (const auto& a : cfg.analyses)
    if (std::find(known_analyses().begin(), known_analyses().end(), a) == known_analyses().end())
      throw PipelineError("unknown analysis '" + a + "'");
  const KGraph& g = *cfg.graph;
  Degree deg = budget(cfg, cfg.degree, 3);
  const int n_max = deg.max();
  if (n_max <= 0) throw PipelineError("degree budget must be positive");

  Json out;
  out["schema"] = 1;
  out["analyses"] = cfg.analyses;
  if (cfg.analyses.empty()) return out;
  out["truncation"] = cfg.truncation;
  out["degree"] = deg.coords();
  out["tolerance"] = cfg.tol;

  if (wants(cfg, "info")) out["info"] = to_json(g);
  if (wants(cfg, "validate"))
    out["validate"] = guarded("validate", [&] { return to_json(validate_factorization(g, std::max(3, n_max))); });
  if (wants(cfg, "cofinal")) out["cofinal"] = guarded("cofinal", [&] { return to_json(g, is_cofinal(g)); });
  if (wants(cfg, "periodicity"))
    out["periodicity"] = guarded("periodicity", [&] { return to_json(g, periodic_pairs(g, std::max(4, n_max))); });
  if (wants(cfg, "measure")) {
    out["measure"] = guarded("measure", [&] {
      std::optional<CylMeasure> mu = cfg.measure;
      if (!mu)
        for (const auto& s : cfg.systems)
          if (s.measure) {
            mu = s.measure;
            break;
          }
      if (!mu) throw PipelineError("measure: no measure given");
      return measure_report(cfg, *mu, deg);
    });
  }

  static const std::vector<std::string> per_system{"sbfs-check", "ck-check", "monic", "irreducible", "atomic",
                                                   "disjoint", "skeleton"};
  bool need_systems = std::any_of(per_system.begin(), per_system.end(), [&](const auto& a) { return wants(cfg, a); });
  std::vector<std::shared_ptr<const ProjectiveSystem>> systems;
  if (need_systems) {
    for (const auto& s : cfg.systems)
      systems.push_back(guarded("system '" + s.label + "'", [&] { return build_system(cfg, s); }));
  }
  Json sys = Json::array();
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const auto& p = systems[i];
    const Sbfs& s = p->sbfs();
    Json j;
    j["label"] = cfg.systems[i].label;
    j["kind"] = s.kind == SbfsKind::standard ? "standard" : "abstract";
    j["atoms"] = s.size();
    j["truncation"] = s.truncation;
    if (cfg.systems[i].restrict_to) j["restricted_to"] = *cfg.systems[i].restrict_to;
    Frame f = make_frame(p, n_max);
    if (wants(cfg, "sbfs-check"))
      j["sbfs-check"] = guarded("sbfs-check", [&] {
        Json r = to_json(validate_sbfs(s, n_max));
        r["projective"] = to_json(validate_projective(*p, n_max, cfg.tol));
        return r;
      });
    if (wants(cfg, "ck-check")) j["ck-check"] = guarded("ck-check", [&] { return to_json(ck_check(f, n_max, cfg.tol)); });
    if (wants(cfg, "monic")) j["monic"] = guarded("monic", [&] { return to_json(monicity_check(f), s); });
    if (wants(cfg, "irreducible"))
      j["irreducible"] = guarded("irreducible", [&] { return to_json(irreducibility_check(f, n_max, cfg.tol)); });
    if (wants(cfg, "atomic"))
      j["atomic"] = guarded("atomic", [&] { return to_json(g, purely_atomic_classify(f), s); });
    sys.push_back(j);
  }
  if (need_systems) out["systems"] = sys;
  if (wants(cfg, "disjoint")) {
    out["disjoint"] = guarded("disjoint", [&] {
      if (systems.size() != 2) throw PipelineError("disjointness needs exactly two systems");
      return to_json(disjointness_check(make_frame(systems[0], n_max), make_frame(systems[1], n_max), n_max, cfg.tol));
    });
  }
  if (wants(cfg, "skeleton")) out["skeleton"] = guarded("skeleton", [&] { return skeleton_report(cfg, systems); });
  out["inconsistent"] = has_inconsistency(out);
  return out;
}

bool has_inconsistency(const Json& j) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "inconsistent" && v.is_boolean() && v.get<bool>()) return true;
      if (k == "consistent" && v.is_boolean() && !v.get<bool>()) return true;
      if (has_inconsistency(v)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (has_inconsistency(v)) return true;
  }
  return false;
}

}  // namespace kg
