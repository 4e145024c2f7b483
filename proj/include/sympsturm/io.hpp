#pragma once

#include "sympsturm/index_engine.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace sympsturm {

using Json = nlohmann::json;

// {"rows": r, "cols": c, "data": [row-major entries]}
Json mat_to_json(const Mat& M);
// Accepts the object form above or a nested array of rows. Rejects NaN/Inf,
// ragged rows and shape mismatches, naming the offending field.
Mat mat_from_json(const Json& j, const std::string& name);

Json inertia_to_json(const Inertia& in);
Json crossing_to_json(const CrossingRecord& c);
Json report_to_json(const IndexReport& r);

// Shortest decimal form that round-trips: 17 significant digits.
std::string format_double(double x);

}  // namespace sympsturm
