#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "abelwave/error.hpp"
#include "commands.hpp"

using namespace abelwave;
using namespace abelwave::cli;

namespace {

void add_common(CLI::App* cmd, CommonArgs& c, bool with_data) {
    cmd->add_option("--config,--curve-config", c.config, "Key-value config file");
    cmd->add_option("--out", c.out, "Output directory (default $ABELWAVE_OUTPUT_DIR or .)");
    cmd->add_option("--family", c.family, "linear, parabolic, hyperbolic, shrinking or custom");
    cmd->add_option("--epsilon", c.epsilon, "Family parameter");
    cmd->add_option("--seed", c.seed, "Seed for random initial data");
    if (with_data) {
        cmd->add_option("--data", c.data, "preset:<name> or csv:<path>");
        cmd->add_option("--modes", c.modes, "Number of modes N");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Series solutions of the wave equation on moving domains and their observability"};
    app.require_subcommand(1);

    SolveAbelArgs solve;
    auto* solve_cmd = app.add_subcommand("solve-abel", "Solve Abel's equation for a boundary curve");
    add_common(solve_cmd, solve.common, false);
    solve_cmd->add_option("--method", solve.method, "closed, product, levy or auto")
        ->check(CLI::IsMember({"closed", "product", "levy", "auto"}));
    solve_cmd->add_option("--tol", solve.tol, "Target accuracy of the constructive solvers");
    solve_cmd->add_option("--points", solve.points, "Rows of the CSV table");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Evaluate the series solution on a grid");
    add_common(sim_cmd, sim.common, true);
    sim_cmd->add_option("--grid", sim.grid, "nx,nt");
    sim_cmd->add_option("--t-max", sim.t_max, "Final time of the dump (default gamma(0))");

    ObserveArgs obs;
    auto* obs_cmd = app.add_subcommand("observe", "Check an observability inequality");
    add_common(obs_cmd, obs.common, true);
    obs_cmd->add_option("--kind", obs.kind, "Observation kind")
        ->check(CLI::IsMember({"left", "right", "interior", "moving", "simultaneous", "gram"}));
    obs_cmd->add_option("--a", obs.a, "Observation point in (0, 1)");
    obs_cmd->add_option("--tau", obs.tau, "'opt' or a window length");
    obs_cmd->add_option("--trials", obs.trials, "Number of random bump data");
    obs_cmd->add_option("--lambda", obs.lambda, "Requested lambda for the minimal time search");
    obs_cmd->add_option("--max-modes", obs.max_modes, "Largest Gram matrix size");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Summarize observation reports as CSV");
    rep_cmd->add_option("--dir", rep.dir, "Directory of JSON reports");
    rep_cmd->add_option("--output", rep.output, "CSV path (default <dir>/summary.csv)");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Run the invariant suite");
    ver_cmd->add_flag("--quick", ver.quick, "Linear family only, fewer random trials");
    ver_cmd->add_option("--out", ver.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*solve_cmd) return run_solve_abel(solve);
        if (*sim_cmd) return run_simulate(sim);
        if (*obs_cmd) return run_observe(obs);
        if (*rep_cmd) return run_report(rep);
        if (*ver_cmd) return run_verify(ver);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumericalFailure;
    }
    return kConfigError;
}
