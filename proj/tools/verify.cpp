#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "abelwave/error.hpp"
#include "abelwave/observability.hpp"
#include "abelwave/quadrature.hpp"
#include "commands.hpp"
#include "output.hpp"

namespace abelwave::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

class Suite {
public:
    explicit Suite(std::string family) : family_(std::move(family)) {}

    // Runs `check`, which returns a detail string and sets `ok`. HypothesisError
    // marks the invariant as not applicable; other errors are failures.
    void run(const std::string& name, const std::function<std::string(bool&)>& check) {
        InvariantResult r{name, family_, "fail", ""};
        try {
            bool ok = false;
            r.detail = check(ok);
            r.status = ok ? "pass" : "fail";
        } catch (const HypothesisError& e) {
            r.status = "skip";
            r.detail = e.what();
        } catch (const std::exception& e) {
            r.detail = std::string("error: ") + e.what();
        }
        results_.push_back(std::move(r));
    }

    void skip(const std::string& name, const std::string& why) {
        results_.push_back({name, family_, "skip", why});
    }

    std::vector<InvariantResult> take() { return std::move(results_); }

private:
    std::string family_;
    std::vector<InvariantResult> results_;
};

double sup_difference(const AbelSolution& a, const AbelSolution& b, double lo, double hi) {
    double d = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = lo + (hi - lo) * i / 2000.0;
        d = std::max(d, std::abs(a.phi(x) - b.phi(x)));
    }
    return d;
}

}  // namespace

std::vector<InvariantResult> verify_family(Family family, double epsilon, bool quick) {
    Suite suite(to_string(family));
    const CharMaps maps(BoundaryCurve::make(family, epsilon));
    const auto& curve = maps.curve();
    const auto abel = closed_form(maps);
    const auto times = optimal_times(maps);
    const bool bounded_left = std::isfinite(times.left);
    const int trials = quick ? 3 : 20;
    std::mt19937_64 rng(20240611);
    std::vector<WaveField> fields;
    for (int i = 0; i < trials; ++i) fields.push_back(make_field(maps, abel, InitialData::random_bump(rng), 64));

    suite.run("abel_residual", [&](bool& ok) {
        ok = abel.residual_sup <= 1e-10;
        return "sup residual " + fmt(abel.residual_sup);
    });

    suite.run("gamma_prime_sign", [&](bool& ok) {
        const double hi = std::min(maps.beta_limit(), 10.0);
        const double lim = std::isfinite(maps.beta_limit()) ? hi - 1e-6 : hi;
        ok = true;
        double worst = curve.monotonicity() < 0 ? 0.0 : 1e300;
        for (int i = 0; i <= 400; ++i) {
            const double y = -1.0 + (lim + 1.0) * i / 400.0;
            const double g = maps.gamma_prime(y);
            if (curve.monotonicity() < 0) {
                ok = ok && g < 1.0;
                worst = std::max(worst, g);
            } else {
                ok = ok && g > 1.0;
                worst = std::min(worst, g);
            }
        }
        return "extreme gamma' " + fmt(worst);
    });

    if (family == Family::Hyperbolic) {
        suite.skip("constructive_solver", "gamma is only defined on a bounded interval");
    } else {
        suite.run("constructive_solver", [&](bool& ok) {
            AbelOptions opt;
            double tol = 1e-5;
            AbelSolution other;
            if (family == Family::Linear) {
                other = product_expansive(maps, opt);
            } else if (family == Family::Parabolic) {
                other = product_parabolic(maps, opt);
            } else {
                other = levy(maps, opt);
                tol = 1e-4;
            }
            const double d = sup_difference(abel, other, -1.0, 10.0);
            ok = d <= tol;
            return to_string(other.method) + " vs closed form " + fmt(d);
        });
    }

    suite.run("orthonormality", [&](bool& ok) {
        double worst = 0.0;
        for (double c : {-1.0, maps.beta(0.5)}) {
            const auto G = exponential_gram(abel, c, maps.gamma(c), 17);
            worst = std::max(worst, (G - Eigen::MatrixXcd::Identity(17, 17)).cwiseAbs().maxCoeff());
        }
        ok = worst <= 1e-8;
        return "max |G - I| " + fmt(worst);
    });

    suite.run("parseval", [&](bool& ok) {
        ok = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(fields.size(), 3); ++i) {
            std::mt19937_64 r2(100 + i);
            const auto data = InitialData::random_bump(r2);
            const auto profile = fold(data);
            const auto c = coefficients(profile, abel, 64);
            quad::Options q;
            q.initial_panels = 32;
            const double norm = quad::integrate(
                [&](double x) { return profile.h(x) * profile.h(x) * abel.phi_prime(x); }, -1.0, 1.0, q).value;
            const double defect = std::abs(norm - c.sum_squares());
            worst = std::max(worst, defect);
            ok = ok && defect <= c.weighted_tail + 1e-10 * norm;
        }
        return "max defect " + fmt(worst);
    });

    suite.run("boundary_conditions", [&](bool& ok) {
        double worst = 0.0;
        for (const auto& f : fields) {
            for (int j = 0; j <= 10; ++j) {
                const double t = 2.0 * j / 10.0;
                worst = std::max({worst, std::abs(f.evaluate(0.0, t).u),
                                  std::abs(f.evaluate(curve.s(t), t).u)});
            }
        }
        ok = worst <= 1e-10;
        return "max boundary value " + fmt(worst);
    });

    suite.run("pde_residual", [&](bool& ok) {
        std::mt19937_64 r2(7);
        std::uniform_real_distribution<double> ut(0.2, 2.0), ux(0.1, 0.9);
        const double h = 1e-3;
        double worst = 0.0, scale = 0.0;
        const auto& f = fields.front();
        for (int i = 0; i < 100; ++i) {
            const double t = ut(r2);
            const double x = ux(r2) * curve.s(t);
            auto u = [&](double xx, double tt) { return f.evaluate_unchecked(xx, tt).u.real(); };
            const double c = u(x, t);
            const double utt = (u(x, t + h) - 2.0 * c + u(x, t - h)) / (h * h);
            const double uxx = (u(x + h, t) - 2.0 * c + u(x - h, t)) / (h * h);
            worst = std::max(worst, std::abs(utt - uxx));
            scale = std::max({scale, std::abs(utt), std::abs(uxx)});
        }
        ok = worst <= 1e-4 * std::max(scale, 1.0);
        return "max |u_tt - u_xx| " + fmt(worst) + " at scale " + fmt(scale);
    });

    suite.run("energy_rate", [&](bool& ok) {
        ok = true;
        double worst = 0.0;
        const auto& f = fields.front();
        for (int j = 1; j <= 10; ++j) {
            const double t = 0.2 * j;
            const double h = 1e-4;
            const double fd = (energy(f, t + h) - energy(f, t - h)) / (2.0 * h);
            const double rate = energy_rate(f, t);
            const double err = std::abs(fd - rate);
            worst = std::max(worst, err);
            ok = ok && err <= std::max(1e-4, 1e-2 * std::abs(rate));
            const double sp = curve.s_prime(t);
            if (std::abs(rate) > 1e-8 && std::abs(sp) > 1e-12) ok = ok && (rate > 0) == (sp < 0);
        }
        return "max |dE/dt - rate| " + fmt(worst);
    });

    suite.run("norm_equivalence", [&](bool& ok) {
        ok = true;
        double worst = 0.0;
        for (const auto& f : fields) {
            const double c = 8.0 * kPi * kPi * f.coefficients().weighted_sum();
            for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
                const auto ext = phi_extrema(abel, maps, t);
                const double e2 = 2.0 * energy(f, t);
                const double slack = 1e-8 * e2;
                const bool in = c * ext.m <= e2 + slack && e2 <= c * ext.M + slack;
                ok = ok && in;
                worst = std::max(worst, std::max(c * ext.m - e2, e2 - c * ext.M) / e2);
            }
        }
        return "largest relative violation " + fmt(worst);
    });

    if (!bounded_left) {
        suite.skip("left_observation", "gamma(0) is infinite");
        suite.skip("right_observation", "beta never reaches 1");
        suite.skip("gram_sharpness", "gamma(0) is infinite");
    } else {
        suite.run("left_observation", [&](bool& ok) {
            ok = true;
            double worst = 0.0;
            for (const auto& f : fields) {
                const auto r = observe_left(f, 0.0);
                ok = ok && r.pass;
                worst = std::max(worst, r.identities.front().rel_err);
            }
            return "identity rel err " + fmt(worst);
        });
        suite.run("right_observation", [&](bool& ok) {
            ok = true;
            double worst = 0.0;
            for (const auto& f : fields) {
                const auto r = observe_right(f, 0.0);
                ok = ok && r.pass;
                for (const auto& c : r.identities) worst = std::max(worst, c.rel_err);
            }
            return "identity rel err " + fmt(worst);
        });
        suite.run("gram_sharpness", [&](bool& ok) {
            const double at_opt = gram_analysis(abel, times.left, 32).sigma_min;
            double prev = 1e300, last = 0.0;
            bool decreasing = true;
            for (int n : {4, 8, 16, 32}) {
                last = gram_analysis(abel, 0.5 * times.left, n).sigma_min;
                decreasing = decreasing && last < prev;
                prev = last;
            }
            ok = at_opt >= 1.0 - 1e-6 && decreasing && last < 0.1;
            return "sigma_min at gamma(0) " + fmt(at_opt) + ", at half window N=32 " + fmt(last);
        });
    }

    for (double a : {0.25, 0.5, 0.75}) {
        suite.run("interior_observation_a" + std::to_string(a).substr(0, 4), [&](bool& ok) {
            ok = true;
            double worst = 0.0;
            for (const auto& f : fields) {
                const auto r = observe_interior(f, a);
                ok = ok && r.pass;
                worst = std::max(worst, r.identities.front().rel_err);
            }
            return "identity rel err " + fmt(worst);
        });
    }

    if (family == Family::Linear) {
        suite.run("moving_observer", [&](bool& ok) {
            ok = true;
            double worst = 0.0;
            for (double a : {0.3, 0.5}) {
                for (const auto& f : fields) {
                    const auto r = observe_moving(f, a);
                    ok = ok && r.pass;
                    for (const auto& c : r.identities) {
                        if (c.name != "shift_law") worst = std::max(worst, c.rel_err);
                    }
                }
            }
            return "mode identity rel err " + fmt(worst);
        });
    }

    suite.run("simultaneous_observation", [&](bool& ok) {
        const auto fixed = FixedString::from_data(InitialData::polynomial(1.0, 1.0));
        const auto& f = fields.front();
        ok = true;
        double prev = -1.0;
        std::ostringstream lambdas;
        for (double tau : {4.0, 8.0, 16.0, 32.0}) {
            const auto r = observe_simultaneous(f, fixed, tau);
            const double lambda = r.values.at("lambda");
            ok = ok && r.pass && lambda > prev;
            prev = lambda;
            lambdas << fmt(lambda) << ' ';
        }
        return "lambda " + lambdas.str();
    });

    suite.run("optimal_times", [&](bool& ok) {
        double err = 0.0;
        if (std::isfinite(times.right)) err = std::abs(maps.beta(times.right) - 1.0);
        if (bounded_left) err = std::max(err, std::abs(times.left - maps.alpha(maps.beta_inv(0.0))));
        ok = err <= 1e-10 && std::isnan(times.right_literal);
        return "defect " + fmt(err);
    });

    return suite.take();
}

int run_verify(const VerifyArgs& args) {
    std::vector<std::pair<Family, double>> cases = {{Family::Linear, 0.5}};
    if (!args.quick) {
        cases.push_back({Family::Parabolic, 1.0});
        cases.push_back({Family::Hyperbolic, 0.5});
        cases.push_back({Family::Shrinking, 0.5});
    }
    Json rows = Json::array();
    int passed = 0, failed = 0, skipped = 0;
    for (const auto& [family, eps] : cases) {
        for (const auto& r : verify_family(family, eps, args.quick)) {
            std::printf("%-4s %-10s %-28s %s\n", r.status == "pass" ? "PASS" : r.status == "fail" ? "FAIL" : "SKIP",
                        r.family.c_str(), r.name.c_str(), r.detail.c_str());
            (r.status == "pass" ? passed : r.status == "fail" ? failed : skipped)++;
            rows.push_back({{"name", r.name}, {"family", r.family}, {"status", r.status}, {"detail", r.detail}});
        }
    }
    std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
    Json j = {{"schema_version", kSchemaVersion},
              {"kind", "verify_summary"},
              {"quick", args.quick},
              {"passed", passed},
              {"failed", failed},
              {"skipped", skipped},
              {"pass", failed == 0},
              {"results", rows}};
    write_json(output_path(resolve_output_dir(args.out, RunConfig{}), "verify.json"), j);
    return failed == 0 ? kOk : kVerificationFailed;
}

}  // namespace abelwave::cli
