#pragma once

#include "kgraph/rep.hpp"

#include "json.hpp"

namespace kg {

using Json = nlohmann::ordered_json;

Json to_json(const KGraph& g);
Json to_json(const FactorizationReport& r);
Json to_json(const KGraph& g, const CofinalityResult& r);
Json to_json(const KGraph& g, const PeriodicityReport& r);
Json to_json(const SbfsReport& r);
Json to_json(const ProjectiveReport& r);
Json to_json(const CkReport& r);
Json to_json(const MonicityReport& r, const Sbfs& s);
Json to_json(const IrreducibilityReport& r);
Json to_json(const DisjointnessReport& r);
Json to_json(const KGraph& g, const AtomicClassification& r, const Sbfs& s);
Json to_json(const IntMatrix& m);

}  // namespace kg
