#pragma once

#include "kgraph/pipeline.hpp"

#include <string>
#include <vector>

namespace kg {

/// An expected value at a JSON pointer of a run's bundle. With `contains`, the value at the
/// pointer must be an array holding `expected`.
struct Finding {
  std::string pointer;
  Json expected;
  bool contains = false;
};

struct CatalogRun {
  std::string name;
  PipelineConfig config;
  std::vector<Finding> findings;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::shared_ptr<const KGraph> graph;
  std::vector<CatalogRun> runs;
};

struct CatalogOptions {
  int truncation = 16;
  int chuva_depth = 4;
  int chain_blocks = 3;
};

const std::vector<std::string>& catalog_names();
/// Throws std::out_of_range listing the catalog for an unknown name.
CatalogEntry builtin_example(const std::string& name, const CatalogOptions& opt = {});

struct FindingResult {
  std::string run;
  std::string pointer;
  Json expected;
  Json actual;
  bool passed = false;
};

struct EntryCheck {
  std::vector<FindingResult> findings;
  std::vector<std::pair<std::string, Json>> bundles;  // per run
  bool passed = true;
  bool inconsistent = false;
};

EntryCheck check_entry(const CatalogEntry& e);

/// 2-graph assembled from colored edges; squares are paired inside each (range, source) block by
/// matching `key` values. Throws if the counts disagree.
struct RawEdge2 {
  std::string name;
  int color;
  std::string range, source;
  std::string tag;  // used by the square key
};
KGraph assemble_2graph(const std::vector<std::string>& vertices, const std::vector<RawEdge2>& edges,
                       const std::vector<std::string>& boundary = {});

}  // namespace kg
