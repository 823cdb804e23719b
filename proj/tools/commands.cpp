#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "abelwave/error.hpp"
#include "abelwave/observability.hpp"
#include "output.hpp"

namespace abelwave::cli {

namespace fs = std::filesystem;

namespace {

struct Setup {
    RunConfig cfg;
    CharMaps maps;
    AbelSolution abel;
};

double abel_horizon(const CharMaps& maps, const RunConfig& cfg) {
    return std::max(cfg.t_max, default_horizon(maps));
}

Setup make_setup(const RunConfig& cfg, std::optional<AbelMethod> method = std::nullopt) {
    CharMaps maps(make_curve(cfg.curve));
    AbelOptions opt;
    opt.tol = cfg.abel_tol;
    opt.t_max = abel_horizon(maps, cfg);
    if (!method && cfg.method) method = resolve_method(*cfg.method, maps);
    auto abel = solve_abel(maps, method, opt);
    return {cfg, std::move(maps), std::move(abel)};
}

std::string csv_number(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::pair<int, int> parse_grid(const std::string& grid) {
    const auto comma = grid.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(grid);
        const int nx = std::stoi(grid.substr(0, comma));
        const int nt = std::stoi(grid.substr(comma + 1));
        if (nx < 2 || nt < 1) throw std::invalid_argument(grid);
        return {nx, nt};
    } catch (const std::logic_error&) {
        throw ConfigError("--grid expects nx,nt with nx >= 2 and nt >= 1, got '" + grid + "'");
    }
}

std::string family_tag(const BoundaryCurve& curve) { return to_string(curve.family()); }

}  // namespace

RunConfig build_config(const CommonArgs& args) {
    RunConfig cfg = args.config.empty() ? RunConfig{} : load_config(args.config);
    if (args.family) cfg.curve.family = family_from_string(*args.family);
    if (args.epsilon) cfg.curve.epsilon = *args.epsilon;
    if (args.data) cfg.data = *args.data;
    if (args.modes) cfg.modes = *args.modes;
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();
    return cfg;
}

int run_solve_abel(const SolveAbelArgs& args) {
    RunConfig cfg = build_config(args.common);
    if (args.tol) cfg.abel_tol = *args.tol;
    if (args.method) cfg.method = *args.method;
    cfg.validate();
    if (args.points < 2) throw ConfigError("--points must be at least 2");
    const auto setup = make_setup(cfg);
    const auto& abel = setup.abel;
    const auto& maps = setup.maps;
    const std::string dir = resolve_output_dir(args.common.out, cfg);
    const std::string stem = "abel_" + family_tag(maps.curve());

    std::ofstream csv(output_path(dir, stem + ".csv"));
    csv << "t,phi,phi_prime,residual\n";
    for (int i = 0; i < args.points; ++i) {
        const double t = abel.t_max * i / (args.points - 1);
        const double res = abel.phi(maps.alpha(t)) - abel.phi(maps.beta(t)) - 1.0;
        csv << csv_number(t) << ',' << csv_number(abel.phi(t)) << ',' << csv_number(abel.phi_prime(t))
            << ',' << csv_number(res) << '\n';
    }
    write_json(output_path(dir, stem + ".json"), certificate_json(abel, maps.curve()));
    std::printf("method %s residual_sup %.3e tolerance %.1e %s\n", to_string(abel.method).c_str(),
                abel.residual_sup, abel.tolerance, abel.certified() ? "certified" : "NOT certified");
    if (!abel.certified()) {
        std::fprintf(stderr, "error: residual exceeds the method tolerance\n");
        return kNumericalFailure;
    }
    return kOk;
}

int run_simulate(const SimulateArgs& args) {
    RunConfig cfg = build_config(args.common);
    if (args.t_max) cfg.t_max = *args.t_max;
    cfg.validate();
    const auto [nx, nt] = parse_grid(args.grid);
    const auto setup = make_setup(cfg);
    const auto& maps = setup.maps;
    std::mt19937_64 rng(cfg.seed);
    const auto data = make_data(cfg.data, setup.abel, rng);
    const auto field = make_field(maps, setup.abel, data, cfg.modes);

    double T = cfg.t_max;
    if (!(T > 0.0)) {
        const double left = optimal_times(maps).left;
        T = std::isfinite(left) ? left : 2.0;
    }
    const std::string dir = resolve_output_dir(args.common.out, cfg);
    std::ofstream csv(output_path(dir, "field.csv"));
    csv << "x,t,u,u_x,u_t\n";
    double max_abs = 0.0, max_imag = 0.0;
    for (int j = 0; j < nt; ++j) {
        const double t = nt == 1 ? 0.0 : T * j / (nt - 1);
        const double s = maps.curve().s(t);
        for (int i = 0; i < nx; ++i) {
            const double x = s * i / (nx - 1);
            const auto v = field.evaluate(x, t);
            max_abs = std::max({max_abs, std::abs(v.u), std::abs(v.u_x), std::abs(v.u_t)});
            max_imag = std::max({max_imag, std::abs(v.u.imag()), std::abs(v.u_x.imag()),
                                 std::abs(v.u_t.imag())});
            csv << csv_number(x) << ',' << csv_number(t) << ',' << csv_number(v.u.real()) << ','
                << csv_number(v.u_x.real()) << ',' << csv_number(v.u_t.real()) << '\n';
        }
    }
    if (max_imag > 1e-8 * (1.0 + max_abs)) {
        throw ConvergenceError("field has an imaginary residue of " + csv_number(max_imag));
    }

    const double sigma = field.coefficients().weighted_sum();
    const double c = 4.0 * std::numbers::pi * std::numbers::pi * sigma;
    Json times = Json::array(), energies = Json::array(), rates = Json::array(),
         lower = Json::array(), upper = Json::array();
    for (int j = 0; j < nt; ++j) {
        const double t = nt == 1 ? 0.0 : T * j / (nt - 1);
        const auto ext = phi_extrema(setup.abel, maps, t);
        times.push_back(t);
        energies.push_back(number(energy(field, t)));
        rates.push_back(number(energy_rate(field, t)));
        lower.push_back(number(c * ext.m));
        upper.push_back(number(c * ext.M));
    }
    Json j = {{"schema_version", kSchemaVersion},
              {"kind", "energy_trace"},
              {"curve", curve_json(maps.curve())},
              {"data", data.label},
              {"modes", cfg.modes},
              {"abel_method", to_string(setup.abel.method)},
              {"norm_squared", number(field.initial_norm_squared())},
              {"data_norm_squared", number(sobolev_norm_squared(data))},
              {"weighted_sum", number(sigma)},
              {"weighted_tail", number(field.coefficients().weighted_tail)},
              {"max_imaginary_residue", number(max_imag)},
              {"times", times},
              {"energy", energies},
              {"energy_rate", rates},
              {"energy_lower", lower},
              {"energy_upper", upper}};
    write_json(output_path(dir, "energy.json"), j);
    std::printf("field %dx%d on [0, %.6g], E(0) = %.10g, weighted tail %.2e\n", nx, nt, T,
                0.5 * field.initial_norm_squared(), field.coefficients().weighted_tail);
    return kOk;
}

int run_observe(const ObserveArgs& args) {
    const RunConfig cfg = build_config(args.common);
    if (args.trials < 1) throw ConfigError("--trials must be at least 1");
    const auto setup = make_setup(cfg);
    const auto& maps = setup.maps;
    const auto& curve = maps.curve();
    const std::string dir = resolve_output_dir(args.common.out, cfg);

    double tau = 0.0;
    if (args.tau != "opt") {
        try {
            std::size_t used = 0;
            tau = std::stod(args.tau, &used);
            if (used != args.tau.size() || !(tau > 0.0)) throw std::invalid_argument(args.tau);
        } catch (const std::logic_error&) {
            throw ConfigError("--tau expects 'opt' or a positive number, got '" + args.tau + "'");
        }
    }

    if (args.kind == "gram") {
        if (tau == 0.0) tau = optimal_times(maps).left;
        std::vector<int> sizes;
        std::vector<GramResult> results;
        for (int n = 4; n <= std::max(4, args.max_modes); n *= 2) {
            sizes.push_back(n);
            results.push_back(gram_analysis(setup.abel, tau, n, cfg.gram_threshold));
        }
        const auto j = gram_json(curve, tau, sizes, results, cfg.gram_threshold);
        write_json(output_path(dir, "gram_" + family_tag(curve) + ".json"), j);
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            std::printf("N=%-3d sigma_min %.6e\n", sizes[i], results[i].sigma_min);
        }
        std::printf("observable: %s\n", j["observable"].get<bool>() ? "yes" : "no");
        return kOk;
    }

    ObserveOptions opt;
    opt.quad_tol = cfg.quad_tol;
    opt.check_tol = cfg.check_tol;
    std::mt19937_64 rng(cfg.seed);
    int failures = 0;
    for (int trial = 0; trial < args.trials; ++trial) {
        const auto data = args.trials == 1 ? make_data(cfg.data, setup.abel, rng)
                                           : InitialData::random_bump(rng);
        const auto field = make_field(maps, setup.abel, data, cfg.modes);
        ObservationReport r;
        if (args.kind == "left") {
            r = observe_left(field, tau, opt);
        } else if (args.kind == "right") {
            r = observe_right(field, tau, opt);
        } else if (args.kind == "interior") {
            r = observe_interior(field, args.a, opt);
        } else if (args.kind == "moving") {
            r = observe_moving(field, args.a, opt);
        } else if (args.kind == "simultaneous") {
            const auto fixed_data = make_data(cfg.fixed_data, setup.abel, rng);
            const auto fixed = FixedString::from_data(fixed_data, cfg.modes);
            const double window = tau > 0.0 ? tau : 4.0;
            r = observe_simultaneous(field, fixed, window, opt);
            if (tau == 0.0) r.notes.push_back("no optimal time; window defaults to 4");
            const std::vector<double> grid = {2, 4, 8, 16, 32, 64};
            r.values["requested_lambda"] = args.lambda;
            r.values["minimal_tau_for_lambda"] =
                minimal_time_for_lambda(field, fixed, grid, args.lambda, opt);
        } else {
            throw ConfigError("unknown observation kind '" + args.kind + "'");
        }
        if ((args.kind == "interior" || args.kind == "moving") && tau > 0.0) {
            r.notes.push_back("--tau ignored; the window is fixed by the observer");
        }
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%03d", trial);
        const std::string name =
            "observe_" + args.kind + (args.trials == 1 ? std::string() : std::string(suffix)) + ".json";
        write_json(output_path(dir, name), report_json(r, curve, data.label));
        std::printf("%s trial %d: %.6e <= %.6e <= %.6e  %s\n", args.kind.c_str(), trial,
                    r.lower_bound, r.integral, r.upper_bound, r.pass ? "pass" : "FAIL");
        if (!r.pass) ++failures;
    }
    return failures == 0 ? kOk : kVerificationFailed;
}

int run_report(const ReportArgs& args) {
    const std::string dir = args.dir.empty() ? resolve_output_dir("", RunConfig{}) : args.dir;
    if (!fs::is_directory(dir)) throw ConfigError("report directory " + dir + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string out = args.output.empty() ? (fs::path(dir) / "summary.csv").string() : args.output;
    std::ostringstream csv;
    csv << "file,observation,family,epsilon,data,a,tau,tau_optimal,integral,norm_squared,lower_bound,"
           "upper_bound,identities_pass,pass\n";
    auto field = [](const Json& j, const char* key) {
        const auto& v = j.at(key);
        return v.is_null() ? std::string("nan") : csv_number(v.get<double>());
    };
    int rows = 0;
    for (const auto& path : files) {
        std::ifstream in(path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error&) {
            continue;
        }
        if (!j.is_object() || j.value("kind", "") != "observation_report") continue;
        bool ids = true;
        for (const auto& c : j.at("identities")) ids = ids && c.at("pass").get<bool>();
        csv << path.filename().string() << ',' << j.at("observation").get<std::string>() << ','
            << j.at("curve").at("family").get<std::string>() << ',' << field(j.at("curve"), "epsilon")
            << ',' << j.at("data").get<std::string>() << ',' << field(j, "a") << ',' << field(j, "tau")
            << ',' << field(j, "tau_optimal") << ',' << field(j, "integral") << ','
            << field(j, "norm_squared") << ',' << field(j, "lower_bound") << ','
            << field(j, "upper_bound") << ',' << (ids ? "true" : "false") << ','
            << (j.at("pass").get<bool>() ? "true" : "false") << '\n';
        ++rows;
    }
    std::ofstream(out) << csv.str();
    std::printf("%d reports summarized in %s\n", rows, out.c_str());
    return kOk;
}

}  // namespace abelwave::cli
