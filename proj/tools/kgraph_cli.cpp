#include "kgraph/catalog.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

struct Options {
  std::string graph;
  std::vector<std::string> measures;
  std::vector<std::string> sbfs;
  std::vector<std::string> restricts;
  std::string example;
  std::string degree;
  std::string step;
  int truncate = 16;
  double tol = 1e-9;
  std::string json_out;
  bool check = false;
  bool list = false;
  std::vector<std::string> flags;  // analyses requested by `example`
};

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw kg::PipelineError("expected a comma-separated list of integers, got '" + s + "'");
    }
  }
  return out;
}

kg::PipelineConfig config_from(const Options& o, std::vector<std::string> analyses) {
  kg::PipelineConfig cfg;
  if (!o.example.empty()) {
    kg::CatalogOptions copt;
    copt.truncation = o.truncate;
    auto entry = kg::builtin_example(o.example, copt);
    cfg = entry.runs.front().config;
  }
  if (!o.graph.empty()) cfg.graph = std::make_shared<kg::KGraph>(kg::load_kgraph_file(o.graph));
  if (!cfg.graph) throw kg::PipelineError("no graph: pass --graph FILE or --example NAME");
  const kg::KGraph& g = *cfg.graph;
  std::vector<kg::CylMeasure> measures;
  for (const auto& m : o.measures) measures.push_back(kg::load_measure_file(g, m));
  if (!measures.empty()) cfg.measure = measures.front();
  if (!o.measures.empty() || !o.sbfs.empty()) cfg.systems.clear();
  std::vector<kg::SystemSpec> systems;
  auto add_standard = [&] {
    for (std::size_t i = 0; i < measures.size(); ++i)
      if (!measures[i].is_eigen()) systems.push_back({o.measures[i], measures[i], std::nullopt, std::nullopt});
  };
  if (o.sbfs.empty()) add_standard();
  for (const auto& path : o.sbfs) {
    auto f = kg::load_sbfs_file(path);
    if (f.standard) {
      if (measures.empty()) throw kg::PipelineError(path + ": a standard system needs --measure");
      add_standard();
    } else {
      systems.push_back({path, std::nullopt, f.spec, std::nullopt});
    }
  }
  if (!systems.empty()) cfg.systems = systems;
  if (!o.restricts.empty()) {
    if (cfg.systems.size() == 1) {
      auto base = cfg.systems.front();
      cfg.systems.clear();
      for (const auto& r : o.restricts) {
        auto s = base;
        s.restrict_to = r;
        s.label = base.label + " restricted to " + r;
        cfg.systems.push_back(s);
      }
    } else {
      if (o.restricts.size() > cfg.systems.size()) throw kg::PipelineError("more --restrict options than systems");
      for (std::size_t i = 0; i < o.restricts.size(); ++i)
        if (o.restricts[i] != "-") cfg.systems[i].restrict_to = o.restricts[i];
    }
  }
  cfg.truncation = o.truncate;
  cfg.tol = o.tol;
  if (!o.degree.empty()) cfg.degree = parse_ints(o.degree);
  if (!o.step.empty()) cfg.step = parse_ints(o.step);
  cfg.analyses = std::move(analyses);
  return cfg;
}

void emit(const Options& o, const kg::Json& j) {
  std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!o.json_out.empty()) {
    std::ofstream out(o.json_out);
    if (!out) throw kg::PipelineError("cannot write " + o.json_out);
    out << text << "\n";
  }
}

int run_example(const Options& o) {
  if (o.list || o.example.empty()) {
    kg::Json j = kg::Json::array();
    for (const auto& n : kg::catalog_names()) j.push_back({{"name", n}, {"description", kg::builtin_example(n).description}});
    emit(o, j);
    return 0;
  }
  kg::CatalogOptions copt;
  copt.truncation = o.truncate;
  auto entry = kg::builtin_example(o.example, copt);
  kg::Json out;
  out["schema"] = 1;
  out["example"] = entry.name;
  out["description"] = entry.description;
  if (o.check) {
    auto res = kg::check_entry(entry);
    kg::Json findings = kg::Json::array();
    for (const auto& f : res.findings)
      findings.push_back({{"run", f.run}, {"pointer", f.pointer}, {"expected", f.expected}, {"actual", f.actual},
                          {"passed", f.passed}});
    out["findings"] = findings;
    out["passed"] = res.passed;
    out["inconsistent"] = res.inconsistent;
    emit(o, out);
    return res.passed ? 0 : 3;
  }
  kg::Json runs = kg::Json::object();
  bool bad = false;
  for (auto& run : entry.runs) {
    if (!o.flags.empty()) run.config.analyses = o.flags;
    if (!o.degree.empty()) run.config.degree = parse_ints(o.degree);
    run.config.tol = o.tol;
    runs[run.name] = kg::run_pipeline(run.config);
    bad = bad || kg::has_inconsistency(runs[run.name]);
  }
  out["runs"] = runs;
  emit(o, out);
  return bad ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyse k-graphs, measures on their path spaces and the representations they induce"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool positional_graph) {
    if (positional_graph) sub->add_option("file", o.graph, "k-graph file (same as --graph)");
    sub->add_option("--graph", o.graph, "k-graph file");
    sub->add_option("--measure", o.measures, "measure file; may be repeated");
    sub->add_option("--sbfs", o.sbfs, "semibranching system file; may be repeated");
    sub->add_option("--restrict", o.restricts, "keep the coding component of this atom; may be repeated");
    sub->add_option("--example", o.example, "use a built-in example as input");
    sub->add_option("--truncate", o.truncate, "atoms kept per geometric family")->check(CLI::PositiveNumber);
    sub->add_option("--degree", o.degree, "degree budget d1,d2,...");
    sub->add_option("--step", o.step, "skeleton step j1,j2,...");
    sub->add_option("--tol", o.tol, "tolerance for floating comparisons");
    sub->add_option("--json-out", o.json_out, "also write the report to this file");
  };
  std::map<CLI::App*, std::string> commands;
  for (const std::string name : {"validate", "info", "cofinal", "periodicity", "measure", "sbfs-check", "ck-check",
                                 "monic", "irreducible", "disjoint", "skeleton"}) {
    auto* sub = app.add_subcommand(name, "run the " + name + " analysis");
    common(sub, true);
    commands[sub] = name;
  }
  auto* ex = app.add_subcommand("example", "run a built-in example");
  ex->add_option("name", o.example, "example name");
  ex->add_flag("--list", o.list, "list the catalog");
  ex->add_flag("--check", o.check, "compare against the expected findings; exit 3 on a mismatch");
  ex->add_option("--truncate", o.truncate, "atoms kept per geometric family")->check(CLI::PositiveNumber);
  ex->add_option("--degree", o.degree, "degree budget d1,d2,...");
  ex->add_option("--tol", o.tol, "tolerance for floating comparisons");
  ex->add_option("--json-out", o.json_out, "also write the report to this file");
  for (const auto& a : kg::known_analyses()) ex->add_flag_callback("--" + a, [&o, a] { o.flags.push_back(a); }, "run " + a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (ex->parsed()) return run_example(o);
    for (const auto& [sub, name] : commands) {
      if (!sub->parsed()) continue;
      std::vector<std::string> analyses{name};
      if (name == "validate") analyses = {"validate", "info"};
      auto cfg = config_from(o, analyses);
      auto bundle = kg::run_pipeline(cfg);
      emit(o, bundle);
      if (kg::has_inconsistency(bundle)) {
        std::cerr << "internal inconsistency: an oracle disagrees with a verdict\n";
        return 3;
      }
      if (name == "validate" && bundle["validate"]["verdict"] == "invalid") return 2;
      return 0;
    }
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
