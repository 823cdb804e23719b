#include "config.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "abelwave/error.hpp"
#include "abelwave/spline.hpp"

namespace abelwave::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'", line);
    }
}

long long to_integer(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'", line);
    }
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).string();
}

// Splits "sine3" into ("sine", 3); the count defaults to `fallback`.
std::pair<std::string, int> split_count(const std::string& name, int fallback) {
    std::size_t i = name.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
    if (i == name.size()) return {name, fallback};
    return {name.substr(0, i), std::stoi(name.substr(i))};
}

}  // namespace

void RunConfig::validate() const {
    if (!(abel_tol > 0.0)) throw ConfigError("abel_tol must be positive");
    if (!(quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
    if (!(check_tol > 0.0)) throw ConfigError("check_tol must be positive");
    if (!(gram_threshold > 0.0)) throw ConfigError("gram_threshold must be positive");
    if (modes < 1) throw ConfigError("modes must be at least 1");
    if (t_max < 0.0) throw ConfigError("t_max must be non-negative");
    if (curve.family == Family::Custom && curve.samples.empty()) {
        throw ConfigError("family = custom needs a samples file");
    }
}

RunConfig parse_config(const std::string& text, const std::string& base_dir, RunConfig cfg) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + body + "'", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);

        if (key == "family") {
            try {
                cfg.curve.family = family_from_string(value);
            } catch (const Error& e) {
                throw ConfigError(e.what(), line);
            }
        } else if (key == "epsilon") {
            cfg.curve.epsilon = to_double(key, value, line);
        } else if (key == "samples") {
            cfg.curve.samples = resolve_path(value, base_dir);
        } else if (key == "data" || key == "fixed_data") {
            std::string spec = value;
            if (spec.rfind("csv:", 0) == 0) spec = "csv:" + resolve_path(spec.substr(4), base_dir);
            else if (spec.rfind("preset:", 0) != 0) {
                throw ConfigError("'" + key + "' expects preset:<name> or csv:<path>", line);
            }
            (key == "data" ? cfg.data : cfg.fixed_data) = spec;
        } else if (key == "modes") {
            cfg.modes = static_cast<int>(to_integer(key, value, line));
        } else if (key == "abel_tol") {
            cfg.abel_tol = to_double(key, value, line);
        } else if (key == "quad_tol") {
            cfg.quad_tol = to_double(key, value, line);
        } else if (key == "check_tol") {
            cfg.check_tol = to_double(key, value, line);
        } else if (key == "gram_threshold") {
            cfg.gram_threshold = to_double(key, value, line);
        } else if (key == "t_max") {
            cfg.t_max = to_double(key, value, line);
        } else if (key == "method") {
            if (value != "closed" && value != "product" && value != "levy" && value != "auto") {
                throw ConfigError("method must be closed, product, levy or auto", line);
            }
            cfg.method = value;
        } else if (key == "output_dir") {
            cfg.output_dir = resolve_path(value, base_dir);
        } else if (key == "seed") {
            const auto v = to_integer(key, value, line);
            if (v < 0) throw ConfigError("seed must be non-negative", line);
            cfg.seed = static_cast<std::uint64_t>(v);
        } else {
            throw ConfigError("unknown key '" + key + "'", line);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, RunConfig defaults) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str(), fs::path(path).parent_path().string(), std::move(defaults));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string resolve_output_dir(const std::string& flag, const RunConfig& config) {
    if (!flag.empty()) return flag;
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return ".";
}

BoundaryCurve make_curve(const CurveSpec& spec) {
    if (spec.family == Family::Custom) {
        const auto cols = read_csv_columns(spec.samples, 2);
        return BoundaryCurve::from_samples(cols[0], cols[1]);
    }
    return BoundaryCurve::make(spec.family, spec.epsilon);
}

std::optional<AbelMethod> resolve_method(const std::string& name, const CharMaps& maps) {
    if (name == "auto" || name.empty()) return std::nullopt;
    if (name == "product") {
        const auto fit = fit_gamma_tail(maps);
        return fit.ell > 1.0 + 1e-2 ? AbelMethod::ProductExpansive : AbelMethod::ProductParabolic;
    }
    return abel_method_from_string(name);
}

InitialData make_data(const std::string& spec, const AbelSolution& abel, std::mt19937_64& rng) {
    if (spec.rfind("csv:", 0) == 0) return InitialData::from_csv(spec.substr(4));
    if (spec.rfind("preset:", 0) != 0) throw ConfigError("data must be preset:<name> or csv:<path>");
    const auto [name, count] = split_count(spec.substr(7), 1);
    InitialData d;
    if (name == "zero") {
        d = InitialData::zero();
    } else if (name == "bump") {
        d = InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5);
        d.label = "bump";
    } else if (name == "polynomial") {
        d = InitialData::polynomial(1.0, 1.0);
    } else if (name == "sine") {
        d = InitialData::sine(count);
    } else if (name == "single") {
        d = InitialData::single_mode(abel, count);
    } else if (name == "random") {
        d = InitialData::random_bump(rng);
    } else {
        throw ConfigError("unknown data preset '" + name + "'");
    }
    return d;
}

}  // namespace abelwave::cli
