#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "abelwave/abel.hpp"
#include "abelwave/boundary.hpp"
#include "abelwave/wave.hpp"

namespace abelwave::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "ABELWAVE_OUTPUT_DIR";

struct CurveSpec {
    Family family = Family::Linear;
    double epsilon = 0.5;
    /// CSV with columns t,s for family = custom.
    std::string samples;
};

struct RunConfig {
    CurveSpec curve;
    /// "preset:<name>" or "csv:<path>".
    std::string data = "preset:bump";
    /// Data of the fixed string for simultaneous observation, reflected to [−1, 0].
    std::string fixed_data = "preset:polynomial";
    int modes = 64;
    double abel_tol = 1e-6;
    double quad_tol = 1e-10;
    double check_tol = 1e-6;
    double gram_threshold = 0.05;
    /// 0 selects the default horizon 10·γ(0).
    double t_max = 0.0;
    std::optional<std::string> method;
    std::string output_dir;
    std::uint64_t seed = 1;

    /// Throws ConfigError unless tolerances are positive and modes >= 1.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Relative paths are taken
/// relative to `base_dir`. Errors carry the offending line number.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "",
                       RunConfig defaults = {});
RunConfig load_config(const std::string& path, RunConfig defaults = {});

/// --out, then output_dir from the config, then $ABELWAVE_OUTPUT_DIR, then ".".
std::string resolve_output_dir(const std::string& flag, const RunConfig& config);

BoundaryCurve make_curve(const CurveSpec& spec);

/// "closed", "product", "levy" or "auto"; "product" picks the expansive or the
/// parabolic product from the tail of γ′.
std::optional<AbelMethod> resolve_method(const std::string& name, const CharMaps& maps);

/// Preset names: zero, bump, polynomial, sine[k], single[n], random.
InitialData make_data(const std::string& spec, const AbelSolution& abel, std::mt19937_64& rng);

}  // namespace abelwave::cli
