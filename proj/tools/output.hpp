#pragma once

#include <string>

#include "json.hpp"

#include "abelwave/observability.hpp"
#include "config.hpp"

namespace abelwave::cli {

using Json = nlohmann::ordered_json;

/// Non-finite numbers become null.
Json number(double v);

Json curve_json(const BoundaryCurve& curve);
Json certificate_json(const AbelSolution& sol, const BoundaryCurve& curve);
Json report_json(const ObservationReport& r, const BoundaryCurve& curve, const std::string& data_label);
Json gram_json(const BoundaryCurve& curve, double tau, const std::vector<int>& sizes,
               const std::vector<GramResult>& results, double threshold);

void write_json(const std::string& path, const Json& j);
/// Creates `dir` (and parents) and returns dir/name.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace abelwave::cli
