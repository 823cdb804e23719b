#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "abelwave/error.hpp"
#include "config.hpp"

using namespace abelwave;
using namespace abelwave::cli;

TEST(ParseConfig, ReadsEveryKey) {
    const auto cfg = parse_config(R"(# curve
family = parabolic
epsilon = 1.5   # trailing comment
data = preset:sine3
fixed_data = preset:zero
modes = 32
abel_tol = 1e-7
quad_tol = 1e-9
check_tol = 1e-5
gram_threshold = 0.1
t_max = 12
method = levy
output_dir = out
seed = 9
)", "/base");
    EXPECT_EQ(cfg.curve.family, Family::Parabolic);
    EXPECT_DOUBLE_EQ(cfg.curve.epsilon, 1.5);
    EXPECT_EQ(cfg.data, "preset:sine3");
    EXPECT_EQ(cfg.fixed_data, "preset:zero");
    EXPECT_EQ(cfg.modes, 32);
    EXPECT_DOUBLE_EQ(cfg.abel_tol, 1e-7);
    EXPECT_DOUBLE_EQ(cfg.quad_tol, 1e-9);
    EXPECT_DOUBLE_EQ(cfg.check_tol, 1e-5);
    EXPECT_DOUBLE_EQ(cfg.gram_threshold, 0.1);
    EXPECT_DOUBLE_EQ(cfg.t_max, 12.0);
    EXPECT_EQ(cfg.method, "levy");
    EXPECT_EQ(std::filesystem::path(cfg.output_dir), std::filesystem::path("/base/out"));
    EXPECT_EQ(cfg.seed, 9u);
}

TEST(ParseConfig, DefaultsWhenEmpty) {
    const auto cfg = parse_config("\n# nothing\n");
    EXPECT_EQ(cfg.curve.family, Family::Linear);
    EXPECT_DOUBLE_EQ(cfg.curve.epsilon, 0.5);
    EXPECT_EQ(cfg.modes, 64);
    EXPECT_EQ(cfg.data, "preset:bump");
    EXPECT_FALSE(cfg.method.has_value());
}

TEST(ParseConfig, RelativePathsFollowConfigDirectory) {
    const auto cfg = parse_config("family = custom\nsamples = curve.csv\ndata = csv:d/data.csv\n", "/cfg");
    EXPECT_EQ(std::filesystem::path(cfg.curve.samples), std::filesystem::path("/cfg/curve.csv"));
    EXPECT_EQ(cfg.data, "csv:" + (std::filesystem::path("/cfg") / "d/data.csv").string());
    const auto abs = parse_config("family = custom\nsamples = /abs/curve.csv\n", "/cfg");
    EXPECT_EQ(abs.curve.samples, "/abs/curve.csv");
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("family = linear\nbogus = 1\n"), 2);
    EXPECT_EQ(line_of("\n\nepsilon = half\n"), 3);
    EXPECT_EQ(line_of("family = circle\n"), 1);
    EXPECT_EQ(line_of("modes 12\n"), 1);
    EXPECT_EQ(line_of("modes = 1.5\n"), 1);
    EXPECT_EQ(line_of("method = newton\n"), 1);
    EXPECT_EQ(line_of("data = bump\n"), 1);
    EXPECT_EQ(line_of("seed = -1\n"), 1);
    EXPECT_EQ(line_of("epsilon =\n"), 1);
}

TEST(ParseConfig, ValidationErrors) {
    EXPECT_THROW(parse_config("modes = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("abel_tol = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("family = custom\n"), ConfigError);
}

TEST(LoadConfig, ReportsPath) {
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
    const auto dir = std::filesystem::temp_directory_path() / "abelwave_cfg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "run.cfg";
    {
        std::ofstream out(path);
        out << "family = shrinking\nepsilon = 0.25\noutput_dir = results\n";
    }
    const auto cfg = load_config(path.string());
    EXPECT_EQ(cfg.curve.family, Family::Shrinking);
    EXPECT_EQ(std::filesystem::path(cfg.output_dir), dir / "results");
    {
        std::ofstream out(path);
        out << "epsilon = x\n";
    }
    try {
        load_config(path.string());
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST(OutputDir, Precedence) {
    RunConfig cfg;
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(resolve_output_dir("", cfg), ".");
    ::setenv(kOutputDirEnv, "/env", 1);
    EXPECT_EQ(resolve_output_dir("", cfg), "/env");
    cfg.output_dir = "/cfg";
    EXPECT_EQ(resolve_output_dir("", cfg), "/cfg");
    EXPECT_EQ(resolve_output_dir("/flag", cfg), "/flag");
    ::unsetenv(kOutputDirEnv);
}

TEST(MakeData, Presets) {
    CharMaps maps(BoundaryCurve::linear(0.5));
    const auto abel = closed_form(maps);
    std::mt19937_64 rng(1);
    for (const char* spec : {"preset:zero", "preset:bump", "preset:polynomial", "preset:sine2", "preset:single3",
                             "preset:random"}) {
        EXPECT_NO_THROW(make_data(spec, abel, rng).validate()) << spec;
    }
    EXPECT_THROW(make_data("preset:triangle", abel, rng), ConfigError);
}

TEST(ResolveMethod, ProductPicksByTail) {
    CharMaps lin(BoundaryCurve::linear(0.5));
    EXPECT_EQ(resolve_method("product", lin), AbelMethod::ProductExpansive);
    CharMaps par(BoundaryCurve::parabolic(1.0));
    EXPECT_EQ(resolve_method("product", par), AbelMethod::ProductParabolic);
    EXPECT_FALSE(resolve_method("auto", par).has_value());
    EXPECT_EQ(resolve_method("closed", par), AbelMethod::ClosedForm);
}
