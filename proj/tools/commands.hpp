#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace abelwave::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Flags shared by the subcommands that build a curve and a field.
struct CommonArgs {
    std::string config;
    std::string out;
    std::optional<std::string> family;
    std::optional<double> epsilon;
    std::optional<std::string> data;
    std::optional<int> modes;
    std::optional<std::uint64_t> seed;
};

/// Config file first, then command line overrides.
RunConfig build_config(const CommonArgs& args);

struct SolveAbelArgs {
    CommonArgs common;
    std::optional<std::string> method;
    std::optional<double> tol;
    int points = 201;
};

struct SimulateArgs {
    CommonArgs common;
    std::string grid = "21,11";
    std::optional<double> t_max;
};

struct ObserveArgs {
    CommonArgs common;
    std::string kind = "left";
    double a = 0.5;
    std::string tau = "opt";
    int trials = 1;
    /// Requested λ for the minimal time search of simultaneous observation.
    double lambda = 1.0;
    int max_modes = 32;
};

struct ReportArgs {
    std::string dir;
    std::string output;
};

struct VerifyArgs {
    bool quick = false;
    std::string out;
};

int run_solve_abel(const SolveAbelArgs& args);
int run_simulate(const SimulateArgs& args);
int run_observe(const ObserveArgs& args);
int run_report(const ReportArgs& args);
int run_verify(const VerifyArgs& args);

struct InvariantResult {
    std::string name;
    std::string family;
    /// "pass", "fail" or "skip".
    std::string status;
    std::string detail;
};

/// Invariant suite for one family; `quick` trims the randomized trials.
std::vector<InvariantResult> verify_family(Family family, double epsilon, bool quick);

}  // namespace abelwave::cli
