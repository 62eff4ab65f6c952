#pragma once

#include "kgraph/measures.hpp"
#include "kgraph/sbfs.hpp"

#include <string>
#include <string_view>

namespace kg {

/// Measure files, one directive per line, '#' starts a comment:
///   measure eigen | measure atomic
///   beta 2 2                       (eigen)
///   xi v0=1 v1=3/2                 (eigen)
///   atom e.g * f 1/4               (atomic: infinite path, then weight)
///   family e g * f geometric 1/2 1/4   (stem, body * cycle, ratio, first weight)
CylMeasure load_measure(const KGraph& g, std::string_view text);
CylMeasure load_measure_file(const KGraph& g, const std::string& path);

/// SBFS files:
///   sbfs standard                  (built from a measure given separately)
///   sbfs abstract
///   domain v = a b
///   weight a 1/2                   (defaults to 1)
///   map e: a->b b->a
///   code 1 a->b                    (optional override of the derived coding map of color 1)
struct SbfsFile {
  bool standard = false;
  AbstractSpec spec;
};

SbfsFile load_sbfs(std::string_view text);
SbfsFile load_sbfs_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace kg
