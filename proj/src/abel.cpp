#include "abelwave/abel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <tuple>

#include <boost/math/special_functions/trigamma.hpp>

#include "abelwave/chebyshev.hpp"
#include "abelwave/error.hpp"

namespace abelwave {

namespace {

constexpr double kClosedFormTol = 1e-10;

double working_horizon(const CharMaps& maps, const AbelOptions& opt) {
    if (opt.t_max > 0.0) return std::min(opt.t_max, maps.horizon());
    return default_horizon(maps);
}

struct LineFit {
    double slope;
    double intercept;
    double residual_var;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - intercept - slope * x[i];
        ss += r * r;
    }
    return {slope, intercept, ss / n};
}

// Wraps a table so evaluation is shared between phi and phi'.
using Table = std::shared_ptr<const PiecewiseChebyshev>;

Table make_table(const std::function<double(double)>& f, double lower, double upper,
                 const PiecewiseChebyshev::Options& opt, const char* what) {
    auto t = std::make_shared<PiecewiseChebyshev>(PiecewiseChebyshev::fit(f, lower, upper, opt));
    if (!t->resolved()) {
        throw ConvergenceError(std::string("could not tabulate ") + what + " to the requested accuracy");
    }
    return t;
}

void finish(AbelSolution& sol, const CharMaps& maps, double t_max, const AbelOptions& opt) {
    sol.t_max = t_max;
    sol.residual_sup = certify_residual(sol, maps, t_max, opt.residual_points);
}

}  // namespace

std::string to_string(AbelMethod method) {
    switch (method) {
        case AbelMethod::ClosedForm: return "closed";
        case AbelMethod::ProductExpansive: return "product-expansive";
        case AbelMethod::ProductParabolic: return "product-parabolic";
        case AbelMethod::Levy: return "levy";
    }
    return "closed";
}

AbelMethod abel_method_from_string(const std::string& name) {
    if (name == "closed") return AbelMethod::ClosedForm;
    if (name == "product-expansive") return AbelMethod::ProductExpansive;
    if (name == "product-parabolic") return AbelMethod::ProductParabolic;
    if (name == "levy") return AbelMethod::Levy;
    throw ConfigError("unknown Abel method '" + name + "'");
}

std::string to_string(Growth growth) {
    switch (growth) {
        case Growth::Exponential: return "exponential";
        case Growth::Polynomial: return "polynomial";
        case Growth::Unknown: return "unknown";
    }
    return "unknown";
}

double linear_eta(double epsilon) { return std::log((1.0 + epsilon) / (1.0 - epsilon)); }

double certify_residual(const AbelSolution& sol, const CharMaps& maps, double t_max, int points) {
    if (points < 2) throw DomainError("residual grid needs at least two points");
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = t_max * i / (points - 1);
        const double r = sol.phi(maps.alpha(t)) - sol.phi(maps.beta(t)) - 1.0;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

AbelSolution closed_form(const CharMaps& maps, const AbelOptions& opt) {
    const auto& curve = maps.curve();
    const double eps = curve.epsilon();
    std::function<double(double)> raw, dphi;
    switch (curve.family()) {
        case Family::Linear: {
            const double eta = linear_eta(eps);
            raw = [eps, eta](double x) { return std::log1p(eps * x) / eta; };
            dphi = [eps, eta](double x) { return eps / (eta * (1.0 + eps * x)); };
            break;
        }
        case Family::Parabolic:
            raw = [eps](double x) { return std::sqrt(eps * eps + 4.0 * eps * x + 4.0) / (2.0 * eps); };
            dphi = [eps](double x) { return 1.0 / std::sqrt(eps * eps + 4.0 * eps * x + 4.0); };
            break;
        case Family::Hyperbolic: {
            const double k = std::numbers::sqrt2 - 1.0;
            raw = [k](double x) { return k * x / (1.0 + k * x); };
            dphi = [k](double x) {
                const double d = 1.0 + k * x;
                return k / (d * d);
            };
            break;
        }
        case Family::Shrinking:
            raw = [eps](double x) {
                const double y = x + 1.0 / eps;
                return 0.25 * eps * y * y;
            };
            dphi = [eps](double x) { return 0.5 * eps * (x + 1.0 / eps); };
            break;
        case Family::Custom:
            throw UnsupportedError("no closed form Abel solution for custom curves");
    }
    AbelSolution sol;
    sol.method = AbelMethod::ClosedForm;
    sol.normalization = -raw(-1.0);
    const double shift = sol.normalization;
    sol.phi = [raw, shift](double x) { return raw(x) + shift; };
    sol.phi_prime = dphi;
    sol.upper = std::numeric_limits<double>::infinity();
    sol.tolerance = kClosedFormTol;
    if (curve.family() == Family::Linear) sol.diagnostics["eta"] = linear_eta(eps);
    finish(sol, maps, working_horizon(maps, opt), opt);
    return sol;
}

TailFit fit_gamma_tail(const CharMaps& maps, int n_max) {
    std::vector<double> xs, dev;
    double x = -1.0;
    double last_slope = 0.0;
    for (int n = 0; n < n_max; ++n) {
        CharMaps::Step st;
        try {
            st = maps.step(x);
        } catch (const DomainError&) {
            break;
        }
        xs.push_back(x);
        dev.push_back(st.derivative - 1.0);
        last_slope = st.derivative;
        x = st.value;
        if (!(x < 1e250)) break;
    }
    if (xs.size() < 8) {
        throw HypothesisError("orbit of -1 leaves the domain of gamma after " +
                              std::to_string(xs.size()) + " steps; tail of gamma' cannot be fitted");
    }
    std::vector<double> lx, ly;
    double sign = 0.0;
    for (std::size_t i = xs.size() / 2; i < xs.size(); ++i) {
        if (xs[i] > 0.0 && std::abs(dev[i]) > 1e-300) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(std::abs(dev[i])));
            sign += dev[i] > 0 ? 1.0 : -1.0;
        }
    }
    if (lx.size() < 4) throw HypothesisError("orbit tail too short to fit gamma' asymptotics");
    const auto fit = least_squares(lx, ly);
    const double delta = -fit.slope;
    const double a = (sign >= 0 ? 1.0 : -1.0) * std::exp(fit.intercept) / (1.0 - delta);
    return {delta, a, last_slope};
}

OrbitSequence orbit(const CharMaps& maps, double x0, int n_max) {
    if (x0 < -1.0) throw DomainError("orbit start must be >= -1");
    OrbitSequence out;
    out.x0 = x0;
    out.values.reserve(static_cast<std::size_t>(n_max) + 1);
    out.values.push_back(x0);
    double x = x0;
    for (int n = 0; n < n_max; ++n) {
        try {
            x = maps.gamma(x);
        } catch (const DomainError&) {
            out.truncated = true;
            break;
        }
        out.values.push_back(x);
        if (!(x < 1e300)) {
            out.truncated = true;
            break;
        }
    }
    const std::size_t count = out.values.size();
    if (count < 8) return out;
    std::vector<double> n_lin, n_log, lx;
    for (std::size_t i = count / 2; i < count; ++i) {
        if (out.values[i] <= 0.0) continue;
        n_lin.push_back(static_cast<double>(i));
        n_log.push_back(std::log(static_cast<double>(i)));
        lx.push_back(std::log(out.values[i]));
    }
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = count - count / 4; i < count; ++i) {
        if (out.values[i - 1] > 0.0) ratio = std::min(ratio, out.values[i] / out.values[i - 1]);
    }
    out.tail_ratio = ratio;
    if (lx.size() < 4) return out;
    const auto semi = least_squares(n_lin, lx);
    const auto loglog = least_squares(n_log, lx);
    out.semilog_slope = semi.slope;
    out.loglog_slope = loglog.slope;
    out.growth = semi.residual_var <= loglog.residual_var ? Growth::Exponential : Growth::Polynomial;
    return out;
}

AbelSolution product_expansive(const CharMaps& maps, const AbelOptions& opt) {
    const double tol = opt.tol;
    double ell = 0.0;
    if (opt.ell) {
        ell = *opt.ell;
    } else {
        double x = -1.0, prev = 0.0;
        int steps = 0;
        for (; steps < 4000; ++steps) {
            CharMaps::Step st;
            try {
                st = maps.step(x);
            } catch (const DomainError&) {
                if (steps < 2) {
                    throw HypothesisError(
                        "gamma is not defined along the orbit of -1; the expansive product needs "
                        "gamma on [-1, inf)");
                }
                break;
            }
            ell = st.derivative;
            x = st.value;
            if (std::abs(ell - prev) <= 1e-15 * ell || !(x < 1e250)) break;
            prev = ell;
        }
    }
    constexpr double kMargin = 1e-3;
    if (!(ell > 1.0 + kMargin)) {
        throw HypothesisError("limit of gamma' is " + std::to_string(ell) +
                              "; the expansive product needs it above 1");
    }

    int max_used = 0;
    auto product = [&maps, ell, tol, &opt, &max_used](double x) {
        double prod = 1.0, prev_d = std::numeric_limits<double>::quiet_NaN();
        double y = x;
        for (int n = 0; n < opt.max_terms; ++n) {
            const auto st = maps.step(y);
            const double term = st.derivative / ell;
            const double d = std::abs(term - 1.0);
            prod *= term;
            if (d < 0.1 * tol) {
                const double q = d / prev_d;
                if (d == 0.0 || (q < 1.0 && d * q / (1.0 - q) < tol) || !(st.value < 1e250)) {
                    max_used = std::max(max_used, n + 1);
                    return prod;
                }
            }
            prev_d = d;
            y = st.value;
        }
        throw ConvergenceError("expansive product did not converge within the term cap",
                               std::abs(prev_d));
    };

    const double t_max = working_horizon(maps, opt);
    const double upper = maps.alpha(t_max) + 1.0;
    auto P = make_table(product, -1.0, upper, {}, "the expansive product");
    auto I = std::make_shared<const PiecewiseChebyshev>(P->antiderivative(0.0));
    const double c_shift = (*I)(1.0) / (ell - 1.0);
    const double log_ell = std::log(ell);

    AbelSolution sol;
    sol.method = AbelMethod::ProductExpansive;
    sol.normalization = -std::log(c_shift) / log_ell;
    const double shift = sol.normalization;
    sol.phi = [I, c_shift, log_ell, shift](double x) {
        return std::log((*I)(x) + c_shift) / log_ell + shift;
    };
    sol.phi_prime = [P, I, c_shift, log_ell](double x) {
        return (*P)(x) / (((*I)(x) + c_shift) * log_ell);
    };
    sol.upper = upper;
    sol.tolerance = tol;

    // Schröder defect |ψ(γ(x)) − ℓψ(x)|/ψ(x) for x with γ(x) inside the table.
    double defect = 0.0;
    const double x_hi = maps.beta(t_max);
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + (x_hi + 1.0) * i / 200.0;
        const double psi = (*I)(x) + c_shift;
        const double psi_g = (*I)(maps.gamma(x)) + c_shift;
        defect = std::max(defect, std::abs(psi_g - ell * psi) / psi);
    }
    sol.diagnostics["ell"] = ell;
    sol.diagnostics["terms"] = max_used;
    sol.diagnostics["schroder_defect"] = defect;
    sol.diagnostics["panels"] = static_cast<double>(P->panels());
    finish(sol, maps, t_max, opt);
    return sol;
}

AbelSolution product_parabolic(const CharMaps& maps, const AbelOptions& opt) {
    const double tol = opt.tol;
    double delta = 0.0, a_coef = 0.0;
    if (opt.delta && opt.a_coef) {
        delta = *opt.delta;
        a_coef = *opt.a_coef;
    } else {
        const auto fit = fit_gamma_tail(maps);
        delta = opt.delta.value_or(fit.delta);
        a_coef = opt.a_coef.value_or(fit.a_coef);
    }
    if (!(delta > 0.0) || std::abs(delta - 1.0) < 0.05) {
        throw HypothesisError("tail exponent delta = " + std::to_string(delta) +
                              " outside the admissible range (delta > 0, delta != 1)");
    }
    const double expo = 1.0 - delta;

    // Product length from the orbit of -1: first n with |term_n - 1| < tol/10
    // while the terms decay. Orbits of larger x are further ahead, so the same
    // length serves every x in the table.
    int length = 0;
    double last_dev = 0.0;
    {
        double x = -1.0;
        auto st = maps.step(x);
        double x1 = st.value;
        double prev_d = std::numeric_limits<double>::infinity();
        for (int n = 0; n < opt.max_terms; ++n) {
            const auto st1 = maps.step(x1);
            const double term = std::pow(x1, expo) * st.derivative / std::pow(st1.value, expo);
            const double d = std::abs(term - 1.0);
            if (d < 0.1 * tol && d < prev_d) {
                length = n + 1;
                last_dev = d;
                break;
            }
            prev_d = d;
            st = st1;
            x1 = st1.value;
        }
        if (length == 0) {
            throw ConvergenceError(
                "parabolic product terms did not decay below tol/10 within the term cap", prev_d);
        }
    }

    auto integrand = [&maps, expo, delta, length](double x) {
        auto st = maps.step(x);
        const double g0 = std::pow(st.value, expo);
        double log_p = 0.0;
        double xn = x, xn1 = st.value;
        double term = 1.0;
        for (int n = 0; n < length; ++n) {
            const auto st1 = maps.step(xn1);
            term = std::pow(xn1, expo) * st.derivative / std::pow(st1.value, expo);
            log_p += std::log(term);
            xn = xn1;
            xn1 = st1.value;
            st = st1;
        }
        // Remaining terms behave like κ/(ν + j)² with ν the effective index of
        // the last term, read off from xₙ^δ growing linearly in n.
        const double y = std::pow(xn, delta);
        const double step_len = std::pow(xn1, delta) - y;
        if (step_len > 0.0) {
            const double nu = y / step_len;
            log_p += std::log(term) * nu * nu * boost::math::trigamma(nu + 1.0);
        }
        return std::exp(log_p) / g0;
    };

    const double t_max = working_horizon(maps, opt);
    const double upper = maps.alpha(t_max) + 1.0;
    PiecewiseChebyshev::Options copt;
    copt.tol = 1e-12;
    auto Q = make_table(integrand, -1.0, upper, copt, "the parabolic product");
    auto I = std::make_shared<const PiecewiseChebyshev>(Q->antiderivative(0.0));
    const double scale = (*I)(1.0);
    if (!(scale > 0.0)) throw ConvergenceError("normalizing integral is not positive");

    AbelSolution sol;
    sol.method = AbelMethod::ProductParabolic;
    sol.phi = [I, scale](double x) { return (*I)(x) / scale; };
    sol.phi_prime = [Q, scale](double x) { return (*Q)(x) / scale; };
    sol.upper = upper;
    sol.tolerance = tol;
    sol.diagnostics["delta"] = delta;
    sol.diagnostics["a"] = a_coef;
    sol.diagnostics["terms"] = length;
    sol.diagnostics["last_term_deviation"] = last_dev;
    sol.diagnostics["normalizing_integral"] = scale;
    sol.diagnostics["panels"] = static_cast<double>(Q->panels());
    finish(sol, maps, t_max, opt);
    return sol;
}

AbelSolution levy(const CharMaps& maps, const AbelOptions& opt) {
    const double tol = opt.tol;
    const double x0 = opt.x0;
    int cap = std::max(4, opt.n_iter);
    std::vector<double> base;
    base.reserve(static_cast<std::size_t>(cap) + 2);
    base.push_back(x0);
    for (int n = 0; n <= cap; ++n) {
        double next;
        try {
            next = maps.gamma(base.back());
        } catch (const DomainError&) {
            break;
        }
        if (!std::isfinite(next)) break;
        base.push_back(next);
    }
    cap = std::min(cap, static_cast<int>(base.size()) - 2);
    if (cap < 32) {
        throw HypothesisError("orbit of x0 leaves the domain of gamma after " +
                              std::to_string(base.size() - 1) +
                              " steps; the Levy quotient needs at least 33");
    }

    // Quotients at iterations n and 2n from one pass over the orbit of x.
    auto quotients = [&maps, &base](double x, int n) {
        double xn = x, qn = 0.0;
        for (int k = 1; k <= 2 * n; ++k) {
            xn = maps.gamma(xn);
            if (k == n) qn = (xn - base[k]) / (base[k + 1] - base[k]);
        }
        const double q2n = (xn - base[2 * n]) / (base[2 * n + 1] - base[2 * n]);
        return std::pair{qn, q2n};
    };
    auto extrapolated = [&](double x, int n) {
        const auto [qn, q2n] = quotients(x, n);
        return 2.0 * q2n - qn;
    };

    // The quotient error grows with the number of bounces between x and x0,
    // so the quotient is tabulated on the fundamental interval [x0, γ(x0)]
    // only and carried to larger x by φ(γ(y)) = φ(y) + 1.
    const double x1 = base[1];
    const std::vector<double> probes{x0 + 0.25 * (x1 - x0), x0 + 0.5 * (x1 - x0),
                                     x0 + 0.75 * (x1 - x0), x0 + 0.95 * (x1 - x0)};
    int n = 8;
    std::vector<double> prev(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) prev[i] = extrapolated(probes[i], n);
    double delta = std::numeric_limits<double>::infinity();
    while (true) {
        if (4 * n > cap) {
            throw ConvergenceError("Levy quotient did not converge within n_iter = " +
                                       std::to_string(cap) + " (last change " +
                                       std::to_string(delta) + ")",
                                   delta);
        }
        n *= 2;
        delta = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double v = extrapolated(probes[i], n);
            delta = std::max(delta, std::abs(v - prev[i]) / std::max(1.0, std::abs(v)));
            prev[i] = v;
        }
        if (delta < 0.1 * tol) break;
    }

    // Rounding in the long orbits leaves noise of order 1e-9 in the quotient,
    // so the table is resolved to a fraction of tol rather than to machine
    // precision.
    PiecewiseChebyshev::Options copt;
    copt.degree = 20;
    copt.tol = std::max(1e-11, 1e-2 * tol);
    auto table = make_table([&](double x) { return extrapolated(x, n); }, x0, x1, copt,
                            "the Levy quotient");
    auto deriv = std::make_shared<const PiecewiseChebyshev>(table->derivative());
    auto knots = std::make_shared<const std::vector<double>>(base);

    // Pulls x back into [x0, x1] with k steps of γ⁻¹; returns (y, k, d y/d x).
    auto owned = std::make_shared<const CharMaps>(maps);
    auto pull_back = [owned, knots, x0, x1](double x) {
        const auto& maps = *owned;
        const auto& b = *knots;
        if (x <= x1) return std::tuple{std::clamp(x, x0, x1), 0, 1.0};
        auto it = std::upper_bound(b.begin(), b.end(), x);
        if (it == b.end()) throw DomainError("Levy solution evaluated beyond its orbit table");
        const int k = static_cast<int>(it - b.begin()) - 1;
        double y = x, dy = 1.0;
        for (int j = 0; j < k; ++j) {
            const double t = maps.alpha_inv(y);
            const double sp = maps.curve().s_prime(t);
            y = maps.beta(t);
            dy *= (1.0 - sp) / (1.0 + sp);
        }
        return std::tuple{std::clamp(y, x0, x1), k, dy};
    };

    const double t_max = working_horizon(maps, opt);
    AbelSolution sol;
    sol.method = AbelMethod::Levy;
    sol.lower = x0;
    sol.normalization = -(*table)(x0);
    const double shift = sol.normalization;
    sol.phi = [table, pull_back, shift](double x) {
        const auto [y, k, dy] = pull_back(x);
        return (*table)(y) + k + shift;
    };
    sol.phi_prime = [deriv, pull_back](double x) {
        const auto [y, k, dy] = pull_back(x);
        return (*deriv)(y) * dy;
    };
    sol.upper = base.back();
    sol.tolerance = tol;
    // Mismatch of φ' across the junction x1 = γ(x0); zero for an exact solution.
    const double d0 = (*deriv)(x0);
    const double junction = std::abs((*deriv)(x1) * maps.gamma_prime(x0) - d0) / d0;
    sol.diagnostics["iterations"] = 2 * n;
    sol.diagnostics["last_change"] = delta;
    sol.diagnostics["panels"] = static_cast<double>(table->panels());
    sol.diagnostics["junction_derivative_defect"] = junction;
    // Any table on [x0, x1] extends to an exact solution; only a smooth junction
    // shows that the quotient converged to the C¹ solution.
    if (junction > std::max(1e-6, 10.0 * tol)) {
        throw ConvergenceError("Levy solution has a jump in phi' of relative size " +
                                   std::to_string(junction) +
                                   " at gamma(x0); gamma' does not tend to 1",
                               junction);
    }
    finish(sol, maps, t_max, opt);
    return sol;
}

AbelSolution solve_abel(const CharMaps& maps, std::optional<AbelMethod> method,
                        const AbelOptions& opt) {
    if (method) {
        switch (*method) {
            case AbelMethod::ClosedForm: return closed_form(maps, opt);
            case AbelMethod::ProductExpansive: return product_expansive(maps, opt);
            case AbelMethod::ProductParabolic: return product_parabolic(maps, opt);
            case AbelMethod::Levy: return levy(maps, opt);
        }
    }
    if (maps.curve().family() != Family::Custom) return closed_form(maps, opt);
    std::optional<TailFit> fit;
    try {
        fit = fit_gamma_tail(maps);
    } catch (const HypothesisError&) {
        // translation-like gamma (gamma' == 1) or a short orbit; only Levy applies
    }
    if (fit && fit->ell > 1.0 + 1e-2) return product_expansive(maps, opt);
    if (fit && fit->delta > 0.0 && std::abs(fit->delta - 1.0) >= 0.05) {
        try {
            return product_parabolic(maps, opt);
        } catch (const ConvergenceError&) {
        } catch (const HypothesisError&) {
        } catch (const DomainError&) {
            // the product orbit left a finite horizon
        }
    }
    return levy(maps, opt);
}

}  // namespace abelwave
