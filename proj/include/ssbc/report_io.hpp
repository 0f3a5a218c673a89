#pragma once

// Serialization of reports to JSON, CSV and a plain-text rendering.
//
// JSON objects keep a fixed key order and every floating-point value is
// rounded to 12 significant digits before it is stored, so dump -> parse ->
// dump is byte-identical. Missing optional values serialize as null.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ssbc/adjust.hpp"
#include "ssbc/feasibility.hpp"
#include "ssbc/mc.hpp"

namespace ssbc {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits; non-finite values become null.
Json json_number(double v);

Json to_json(const CoverageRegime& regime);
Json to_json(const AdjustmentReport& report);
Json to_json(const FeasibilityReport& report);
Json to_json(const RungTable& table);
Json to_json(const SimReport& report);

/// Canonical text form: two-space indent, trailing newline.
std::string dump_json(const Json& j);

/// Columns u, alpha_prime, attainable_delta.
void write_rungs_csv(std::ostream& os, const RungTable& table);

/// Columns coverage_level, count, theory_pmf for one simulated method.
void write_histogram_csv(std::ostream& os, const MethodResult& result, int m);

/// Indented "key: value" lines rendered from the JSON form.
void write_human(std::ostream& os, const Json& j, int indent = 0);

}  // namespace ssbc
