#include "output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "abelwave/error.hpp"

namespace abelwave::cli {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

namespace {

Json number_map(const std::map<std::string, double>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[k] = number(v);
    return j;
}

}  // namespace

Json curve_json(const BoundaryCurve& curve) {
    return {{"family", to_string(curve.family())},
            {"epsilon", number(curve.epsilon())},
            {"label", curve.label()},
            {"sup_s_prime", number(curve.sup_s_prime())},
            {"time_scale", number(curve.time_scale())}};
}

Json certificate_json(const AbelSolution& sol, const BoundaryCurve& curve) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "abel_certificate"},
            {"curve", curve_json(curve)},
            {"method", to_string(sol.method)},
            {"residual_sup", number(sol.residual_sup)},
            {"tolerance", number(sol.tolerance)},
            {"certified", sol.certified()},
            {"normalization", number(sol.normalization)},
            {"t_max", number(sol.t_max)},
            {"lower", number(sol.lower)},
            {"upper", number(sol.upper)},
            {"diagnostics", number_map(sol.diagnostics)}};
}

Json report_json(const ObservationReport& r, const BoundaryCurve& curve, const std::string& data_label) {
    Json ids = Json::array();
    for (const auto& c : r.identities) {
        ids.push_back({{"name", c.name},
                       {"computed", number(c.computed)},
                       {"expected", number(c.expected)},
                       {"rel_err", number(c.rel_err)},
                       {"tolerance", number(c.tolerance)},
                       {"pass", c.pass}});
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "observation_report"},
            {"observation", to_string(r.kind)},
            {"curve", curve_json(curve)},
            {"data", data_label},
            {"a", number(r.a)},
            {"window", {0.0, number(r.tau)}},
            {"tau", number(r.tau)},
            {"tau_optimal", number(r.tau_optimal)},
            {"integral", number(r.integral)},
            {"norm_squared", number(r.norm_squared)},
            {"lower_bound", number(r.lower_bound)},
            {"upper_bound", number(r.upper_bound)},
            {"lower_applies", r.lower_applies},
            {"upper_applies", r.upper_applies},
            {"lower_holds", r.lower_holds},
            {"upper_holds", r.upper_holds},
            {"constants", number_map(r.constants)},
            {"identities", ids},
            {"values", number_map(r.values)},
            {"notes", r.notes},
            {"tolerance", number(r.tolerance)},
            {"pass", r.pass}};
}

Json gram_json(const BoundaryCurve& curve, double tau, const std::vector<int>& sizes,
               const std::vector<GramResult>& results, double threshold) {
    Json rows = Json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        rows.push_back({{"N", sizes[i]},
                        {"sigma_min", number(results[i].sigma_min)},
                        {"sigma_max", number(results[i].sigma_max)}});
        if (i > 0 && results[i].sigma_min > results[i - 1].sigma_min * (1.0 + 1e-9)) decreasing = false;
    }
    const bool observable = !results.empty() && results.back().sigma_min >= threshold;
    return {{"schema_version", kSchemaVersion},
            {"kind", "gram_report"},
            {"curve", curve_json(curve)},
            {"tau", number(tau)},
            {"threshold", threshold},
            {"sizes", rows},
            {"sigma_min_nonincreasing", decreasing},
            {"observable", observable}};
}

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string output_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace abelwave::cli
