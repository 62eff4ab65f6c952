#pragma once

#include "kgraph/formats.hpp"
#include "kgraph/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kg {

/// One representation to analyse: a standard system built from an atomic measure, or an
/// abstract system. With restrict_to set, the system is cut down to the coding component of
/// that atom.
struct SystemSpec {
  std::string label;
  std::optional<CylMeasure> measure;
  std::optional<AbstractSpec> abstract;
  std::optional<std::string> restrict_to;
};

struct PipelineConfig {
  std::shared_ptr<const KGraph> graph;
  std::vector<SystemSpec> systems;
  /// Explicit measure for the measure analysis; defaults to the first system's measure.
  std::optional<CylMeasure> measure;
  int truncation = 16;
  std::vector<int> degree;  // empty: (3, ..., 3)
  std::vector<int> step;    // skeleton step J; empty: (1, ..., 1)
  double tol = 1e-9;
  int random_partitions = 50;
  std::vector<std::string> analyses;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& known_analyses();

/// Throws PipelineError on an invalid configuration and wraps any failure of a sub-analysis
/// with its name.
Json run_pipeline(const PipelineConfig& cfg);

/// Built systems, in config order.
std::vector<std::shared_ptr<const ProjectiveSystem>> build_systems(const PipelineConfig& cfg);

/// True when some sub-report raised its inconsistency flag.
bool has_inconsistency(const Json& bundle);

}  // namespace kg
