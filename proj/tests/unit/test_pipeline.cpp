#include "doctest.h"

#include "kgraph/catalog.hpp"
#include "kgraph/formats.hpp"
#include "kgraph/pipeline.hpp"

using namespace kg;

namespace {

PipelineConfig ckss_config() {
  PipelineConfig cfg;
  cfg.graph = std::make_shared<KGraph>(load_kgraph_file(KGRAPH_DATA_DIR "/ckss.kg"));
  cfg.systems.push_back({"ckss", load_measure_file(*cfg.graph, KGRAPH_DATA_DIR "/ckss.measure"), {}, {}});
  cfg.truncation = 8;
  cfg.random_partitions = 5;
  cfg.analyses = {"info", "measure", "sbfs-check", "ck-check", "irreducible"};
  return cfg;
}

}  // namespace

TEST_CASE("bundles are deterministic") {
  auto a = run_pipeline(ckss_config()).dump(2);
  auto b = run_pipeline(ckss_config()).dump(2);
  CHECK(a == b);
}

TEST_CASE("an empty analysis list gives the bare bundle") {
  auto cfg = ckss_config();
  cfg.analyses.clear();
  auto j = run_pipeline(cfg);
  CHECK(j.size() == 2);
  CHECK(j.at("schema") == 1);
  CHECK_FALSE(has_inconsistency(j));
}

TEST_CASE("bundle contents") {
  auto j = run_pipeline(ckss_config());
  CHECK(j.at("measure").at("cylinder_masses").at("e.e") == "3/8");
  CHECK(j.at("systems").at(0).at("ck-check").at("verdict") == "holds");
  CHECK(j.at("systems").at(0).at("irreducible").at("verdict") == "reducible");
  CHECK_FALSE(has_inconsistency(j));
}

TEST_CASE("configuration errors") {
  auto cfg = ckss_config();
  cfg.analyses = {"nonsense"};
  CHECK_THROWS_AS(run_pipeline(cfg), PipelineError);
  cfg = ckss_config();
  cfg.analyses = {"disjoint"};
  CHECK_THROWS_AS(run_pipeline(cfg), PipelineError);
  cfg = ckss_config();
  cfg.systems[0].restrict_to = "v1 * f";
  CHECK_THROWS(run_pipeline(cfg));
  cfg = ckss_config();
  cfg.degree = {1, 2};
  CHECK_THROWS_AS(run_pipeline(cfg), PipelineError);
}

TEST_CASE("inconsistency search") {
  Json j = {{"a", {{"b", Json::array({Json{{"inconsistent", false}}, Json{{"consistent", false}}})}}}};
  CHECK(has_inconsistency(j));
  j = {{"inconsistent", false}};
  CHECK_FALSE(has_inconsistency(j));
}

TEST_CASE("catalog lookup") {
  CHECK(catalog_names().size() == 10);
  for (const auto& n : catalog_names()) CHECK(builtin_example(n).name == n);
  CHECK_THROWS_AS(builtin_example("nope"), std::out_of_range);
  auto e = builtin_example("ex:CKSS", {8, 4, 3});
  auto r = check_entry(e);
  CHECK(r.passed);
  CHECK_FALSE(r.inconsistent);
}
