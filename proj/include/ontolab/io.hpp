#pragma once

// File formats: the universe description JSON ({"dim", "target", "phase"}),
// report serialization, and RFC-quoted CSV.

#include <json.hpp>

#include <string>
#include <vector>

#include "ontolab/beables.hpp"
#include "ontolab/conservation.hpp"
#include "ontolab/evolution.hpp"

namespace ontolab {

using Json = nlohmann::ordered_json;

Json universe_to_json(const GeneralizedPermutation& p);
GeneralizedPermutation universe_from_json(const Json& j);
GeneralizedPermutation load_universe(const std::string& path);

Json state_class_to_json(const StateClass& c);

/// { "initial_class": ..., "final_class": ..., "deviation": ..., "verdict": "pass"|"fail" }
Json conservation_report_to_json(const ConservationReport& r);

/// RFC 4180 quoting: fields containing commas, quotes or newlines are quoted,
/// embedded quotes doubled.
std::string csv_field(const std::string& value);
std::string csv_row(const std::vector<std::string>& fields);

std::string cone_map_to_csv(const std::vector<ConeMapRow>& rows);
Json cone_map_to_json(const std::vector<ConeMapRow>& rows);

/// Fixed-format float used in CSV bodies (shortest round-trip).
std::string format_double(double v);

}  // namespace ontolab
