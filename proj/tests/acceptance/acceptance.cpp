// Acceptance checks, one per criterion. `acceptance N` runs criterion N,
// `acceptance` runs all of them. Each prints a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "abelwave/error.hpp"
#include "abelwave/observability.hpp"
#include "abelwave/quadrature.hpp"

using namespace abelwave;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Problem {
    CharMaps maps;
    AbelSolution abel;
    explicit Problem(BoundaryCurve c) : maps(std::move(c)), abel(closed_form(maps)) {}
};

InitialData reference_bump() { return InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5); }

const std::pair<Family, double> kFamilies[] = {
    {Family::Linear, 0.5}, {Family::Parabolic, 1.0}, {Family::Hyperbolic, 1.0}, {Family::Shrinking, 0.5}};

// Independent linear-family formulas.
double lin_eta(double eps) { return std::log((1.0 + eps) / (1.0 - eps)); }
double lin_phi_raw(double eps, double x) { return std::log(1.0 + eps * x) / lin_eta(eps); }
double lin_phi_prime(double eps, double x) { return eps / (lin_eta(eps) * (1.0 + eps * x)); }

Outcome closed_form_residuals() {
    const std::pair<Family, double> cases[] = {
        {Family::Linear, 0.25},    {Family::Linear, 0.5},     {Family::Parabolic, 0.5},
        {Family::Parabolic, 1.0},  {Family::Hyperbolic, 1.0}, {Family::Hyperbolic, 2.0},
        {Family::Shrinking, 0.25}, {Family::Shrinking, 0.5}};
    double worst = 0.0;
    for (auto [family, eps] : cases) {
        Problem p(BoundaryCurve::make(family, eps));
        for (int i = 0; i < 2000; ++i) {
            const double t = 10.0 * i / 1999.0;
            const double s = p.maps.curve().s(t);
            worst = std::max(worst, std::abs(p.abel.phi(t + s) - p.abel.phi(t - s) - 1.0));
        }
    }
    return {worst <= 1e-10, "sup residual over 8 curves " + fmt(worst)};
}

double sup_difference(const AbelSolution& a, const AbelSolution& b, double lo, double hi) {
    double d = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = lo + (hi - lo) * i / 2000.0;
        d = std::max(d, std::abs(a.phi(x) - b.phi(x)));
    }
    return d;
}

Outcome solver_cross_validation() {
    std::ostringstream os;
    bool ok = true;
    for (double eps : {0.25, 0.5}) {
        CharMaps m(BoundaryCurve::linear(eps));
        const double d = sup_difference(product_expansive(m), closed_form(m), -1.0, 10.0);
        ok = ok && d <= 1e-5;
        os << "expansive(" << eps << ") " << fmt(d) << ", ";
    }
    {
        CharMaps m(BoundaryCurve::parabolic(1.0));
        const double d = sup_difference(product_parabolic(m), closed_form(m), -1.0, 10.0);
        ok = ok && d <= 1e-5;
        os << "parabolic(1) " << fmt(d) << ", ";
    }
    {
        CharMaps m(BoundaryCurve::shrinking(0.5));
        const double d = sup_difference(levy(m), closed_form(m), -1.0, 10.0);
        ok = ok && d <= 1e-4;
        os << "levy shrinking(0.5) " << fmt(d);
    }
    return {ok, os.str()};
}

Outcome orthonormality_parseval() {
    bool ok = true;
    double worst_gram = 0.0, worst_ratio = 0.0;
    for (auto [family, eps] : kFamilies) {
        Problem p(BoundaryCurve::make(family, eps));
        // Window starts must stay below sup β (which is 0 for the hyperbolic curve).
        const double third = p.maps.beta_limit() > 0.5 ? 0.5 : -0.25;
        for (double c : {-1.0, -0.5, third}) {
            // One-period orthonormality: ∫_c^{γ(c)} e^{2πi(n−m)φ}φ′ = δ_{nm}.
            const auto G = exponential_gram(p.abel, c, p.maps.gamma(c), 17);
            worst_gram = std::max(worst_gram, (G - Eigen::MatrixXcd::Identity(17, 17)).cwiseAbs().maxCoeff());
        }
        const auto profile = fold(reference_bump());
        const auto coeffs = coefficients(profile, p.abel, 64);
        quad::Options q;
        q.initial_panels = 32;
        const double norm =
            quad::integral([&](double x) { return profile.h(x) * profile.h(x) * p.abel.phi_prime(x); }, -1.0, 1.0, q);
        const double defect = std::abs(norm - coeffs.sum_squares());
        const double allowed = coeffs.weighted_tail + 1e-10 * norm;
        worst_ratio = std::max(worst_ratio, defect / allowed);
        ok = ok && defect <= allowed;
    }
    ok = ok && worst_gram <= 1e-8;
    return {ok, "max |G - I| " + fmt(worst_gram) + ", max Parseval defect / tail bound " + fmt(worst_ratio)};
}

Outcome norm_equivalence_energy_sandwich() {
    bool ok = true;
    double worst = -INFINITY;
    int checks = 0;
    for (auto [family, eps] : kFamilies) {
        Problem p(BoundaryCurve::make(family, eps));
        std::mt19937_64 rng(2024);
        const auto e0 = phi_extrema(p.abel, p.maps, 0.0);
        for (int trial = 0; trial < 20; ++trial) {
            const auto field = make_field(p.maps, p.abel, InitialData::random_bump(rng), 64);
            const double sum = 8.0 * kPi * kPi * field.coefficients().weighted_sum();
            const double norm = field.initial_norm_squared();
            for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
                const auto et = phi_extrema(p.abel, p.maps, t);
                const double e = energy(field, t);
                const double slack = 1e-8 * e;
                // 8π²m(t)Σn²|A_n|² ≤ 2E(t) ≤ 8π²M(t)Σn²|A_n|²
                const double v1 = std::max(sum * et.m - 2.0 * e, 2.0 * e - sum * et.M) / (2.0 * e);
                // m(t)/(2M(0))‖·‖² ≤ E(t) ≤ M(t)/(2m(0))‖·‖²
                const double v2 = std::max(et.m / (2.0 * e0.M) * norm - e, e - et.M / (2.0 * e0.m) * norm) / e;
                worst = std::max({worst, v1, v2});
                ok = ok && v1 <= slack / e && v2 <= slack / e;
                ++checks;
            }
        }
    }
    return {ok, std::to_string(checks) + " samples, largest relative violation " + fmt(worst) +
                    " (negative means strict)"};
}

Outcome energy_derivative() {
    bool ok = true;
    double worst = 0.0;
    for (auto [family, eps] : {std::pair{Family::Linear, 0.5}, std::pair{Family::Parabolic, 1.0},
                               std::pair{Family::Shrinking, 0.5}}) {
        Problem p(BoundaryCurve::make(family, eps));
        const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
        for (int j = 1; j <= 10; ++j) {
            const double t = 0.3 * j;
            const double h = 1e-4;
            const double fd = (energy(field, t + h) - energy(field, t - h)) / (2.0 * h);
            const double s = p.maps.curve().s_prime(t);
            const auto ux = field.evaluate_unchecked(p.maps.curve().s(t), t).u_x;
            const double rate = 0.5 * s * (s * s - 1.0) * std::norm(ux);
            const double err = std::abs(fd - rate);
            worst = std::max(worst, err);
            ok = ok && err <= std::max(1e-4, 1e-2 * std::abs(rate));
            if (std::abs(rate) > 1e-10) ok = ok && ((rate > 0) == (s < 0));
        }
    }
    return {ok, "30 times over 3 curves, max |dE/dt - rate| " + fmt(worst) + ", sign law checked"};
}

Outcome left_boundary_identity() {
    bool ok = true;
    double worst = 0.0;
    for (auto [family, eps] : {std::pair{Family::Linear, 0.5}, std::pair{Family::Parabolic, 1.0},
                               std::pair{Family::Shrinking, 0.5}}) {
        Problem p(BoundaryCurve::make(family, eps));
        const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
        const double tau = p.maps.gamma(0.0);
        const double w = quad::integral(
            [&](double t) { return std::norm(field.evaluate_unchecked(0.0, t).u_x) / p.abel.phi_prime(t); }, 0.0,
            tau, quad::Options{.rel_tol = 1e-11});
        const double expected = 16.0 * kPi * kPi * field.coefficients().weighted_sum();
        const double rel = std::abs(w - expected) / expected;
        worst = std::max(worst, rel);
        const auto r = observe_left(field, 0.0);
        const double c1 = 2.0 * phi_extrema(p.abel, p.maps, p.maps.beta_inv(0.0)).m /
                          phi_extrema(p.abel, p.maps, 0.0).M;
        const double c2 = 2.0 * phi_extrema(p.abel, p.maps, p.maps.beta_inv(0.0)).M /
                          phi_extrema(p.abel, p.maps, 0.0).m;
        const double lower = c1 * field.initial_norm_squared(), upper = c2 * field.initial_norm_squared();
        const double slack = 1e-6 * r.integral;
        ok = ok && rel <= 1e-5 && r.integral >= lower - slack && r.integral <= upper + slack;
        ok = ok && std::abs(r.constants.at("C1") - c1) <= 1e-12 * c1 && std::abs(r.constants.at("C2") - c2) <= 1e-12 * c2;
    }
    return {ok, "max identity rel err " + fmt(worst) + ", double inequality holds on 3 curves"};
}

Outcome right_boundary_inequality() {
    bool ok = true;
    double worst = 0.0;
    for (auto [family, eps] : {std::pair{Family::Linear, 0.5}, std::pair{Family::Parabolic, 1.0},
                               std::pair{Family::Shrinking, 0.5}}) {
        Problem p(BoundaryCurve::make(family, eps));
        const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
        const auto r = observe_right(field, 0.0);
        for (const auto& c : r.identities) {
            if (c.name == "ut_equals_sprime_ux") {
                worst = std::max(worst, c.rel_err);
                ok = ok && c.rel_err <= 1e-6;
            }
        }
        // C1 = m0/(2M0(1+σ))(1 + m(t0)/M(t0))², C2 = M0/(2m0(1−σ))(1 + M(t0)/m(t0))².
        const auto e0 = phi_extrema(p.abel, p.maps, 0.0);
        const auto et = phi_extrema(p.abel, p.maps, p.maps.beta_inv(0.0));
        const double sigma = p.maps.curve().sup_s_prime();
        const double c1 = e0.m / (2.0 * e0.M * (1.0 + sigma)) * std::pow(1.0 + et.m / et.M, 2);
        const double c2 = e0.M / (2.0 * e0.m * (1.0 - sigma)) * std::pow(1.0 + et.M / et.m, 2);
        const double n2 = field.initial_norm_squared();
        const double slack = 1e-6 * std::max(r.integral, n2);
        ok = ok && r.integral >= c1 * n2 - slack && r.integral <= c2 * n2 + slack;
    }
    return {ok, "u_t/u_x substitution max rel err " + fmt(worst) + ", inequality holds on 3 curves"};
}

Outcome interior_point() {
    const double eps = 0.5;
    Problem p(BoundaryCurve::linear(eps));
    const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
    bool ok = true;
    std::ostringstream os;
    for (double a : {0.25, 0.5, 0.75}) {
        const auto r = observe_interior(field, a);
        double rel = INFINITY;
        for (const auto& c : r.identities) {
            if (c.name == "one_period_t_minus_a") rel = c.rel_err;
        }
        // Linear family: β⁻¹(−a) = (1 − a)/(1 − ε), φ′ decreasing so m(t) = φ′(α(t)),
        // M(0) = φ′(−1), and φ′(t+a)/φ′(t−a) increases in t up to τ_a.
        const double tau = a + 3.0 * (-a) + 4.0;
        const double t1 = (1.0 - a) / (1.0 - eps);
        const double m_t1 = lin_phi_prime(eps, t1 + 1.0 + eps * t1);
        const double M_0 = lin_phi_prime(eps, -1.0);
        const double q = lin_phi_prime(eps, tau + a) / lin_phi_prime(eps, tau - a);
        const double c1 = m_t1 / (2.0 * M_0) * std::pow(1.0 - std::sqrt(q), 2);
        const double lower = c1 * field.initial_norm_squared();
        const bool holds = r.integral >= lower * (1.0 - 1e-6);
        const bool match = std::abs(r.constants.at("C1") - c1) <= 1e-6 * c1;
        ok = ok && rel <= 1e-5 && holds && match && std::abs(r.tau - tau) < 1e-12;
        os << "a=" << a << " id " << fmt(rel) << " C1 " << fmt(c1) << " ratio " << fmt(r.integral / lower) << "; ";
    }
    return {ok, os.str()};
}

Outcome moving_observer() {
    const double eps = 0.5;
    Problem p(BoundaryCurve::linear(eps));
    const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
    bool ok = true;
    std::ostringstream os;
    for (double a : {0.25, 0.5, 0.75}) {
        // φ(t ± a(1+εt)) = φ(t) + φ(±a) for φ = log(1 + εx)/η.
        double shift = 0.0;
        const auto raw = [&](double x) { return p.abel.phi(x) - p.abel.normalization; };
        for (int i = 0; i <= 400; ++i) {
            const double t = 4.0 * i / 400.0;
            for (double sg : {1.0, -1.0}) {
                shift = std::max(shift, std::abs(raw(t + sg * a * (1.0 + eps * t)) - raw(t) - raw(sg * a)));
                shift = std::max(shift, std::abs(lin_phi_raw(eps, t + sg * a * (1.0 + eps * t)) -
                                                 lin_phi_raw(eps, t) - lin_phi_raw(eps, sg * a)));
            }
        }
        const auto r = observe_moving(field, a);
        // ∫₀^{2/(1−ε)} |u_t(a s(t), t)|²/φ′(t) dt = (4π²η²/ε²) Σ n²|A_n|² M_n² with
        // M_n² = |φ′(a) − φ′(−a)e^{2πin(φ(a)−φ(−a))}|².
        const double eta = lin_eta(eps);
        const double T = 2.0 / (1.0 - eps);
        const double weighted = quad::integral(
            [&](double t) {
                return std::norm(field.evaluate_unchecked(a * (1.0 + eps * t), t).u_t) / lin_phi_prime(eps, t);
            },
            0.0, T, quad::Options{.rel_tol = 1e-11});
        const double dp = lin_phi_prime(eps, a), dm = lin_phi_prime(eps, -a);
        const double dphi = lin_phi_raw(eps, a) - lin_phi_raw(eps, -a);
        const auto& c = field.coefficients();
        double series = 0.0;
        for (int n = -c.N; n <= c.N; ++n) {
            const double mn2 = std::norm(dp - dm * std::exp(std::complex<double>(0.0, 2.0 * kPi * n * dphi)));
            series += double(n) * n * std::norm(c[n]) * mn2;
        }
        const double expected = 4.0 * kPi * kPi * eta * eta / (eps * eps) * series;
        const double rel = std::abs(weighted - expected) / expected;
        const double d = 1.0 - eps * eps * a * a;
        const double c1 = (1.0 - eps) / (1.0 + eps) * 2.0 * eps * eps * a * a / (d * d * eta * eta);
        const double c2 = (1.0 + eps) / (1.0 - eps) * 2.0 / (d * d * eta * eta);
        const bool consts = std::abs(r.constants.at("C1") - c1) <= 1e-12 * c1 &&
                            std::abs(r.constants.at("C2") - c2) <= 1e-12 * c2;
        ok = ok && shift <= 1e-12 && rel <= 1e-5 && consts && r.lower_holds && r.upper_holds;
        os << "a=" << a << " shift " << fmt(shift) << " identity " << fmt(rel) << "; ";
    }
    return {ok, os.str()};
}

Outcome simultaneous_observation() {
    const auto fixed_data = InitialData::polynomial(1.0, 1.0);
    const auto fixed = FixedString::from_data(fixed_data);
    const double period = quad::integral([&](double t) { return std::pow(fixed.v_x0(t), 2); }, 0.0, 2.0,
                                         quad::Options{.rel_tol = 1e-12});
    const double ev = fixed.energy();
    const double rel = std::abs(period - ev) / ev;
    const bool period_ok = rel <= 1e-6;

    Problem p(BoundaryCurve::linear(0.5));
    const auto field = make_field(p.maps, p.abel, reference_bump(), 64);
    bool increasing = true;
    double prev = -INFINITY;
    std::ostringstream lam;
    for (double tau : {4.0, 8.0, 16.0, 32.0}) {
        const double l = observe_simultaneous(field, fixed, tau).values.at("lambda");
        increasing = increasing && l > prev;
        prev = l;
        lam << fmt(l) << " ";
    }
    std::ostringstream os;
    os << "int_0^2 |v_x(0,t)|^2 = " << fmt(period) << " vs E_v(0) = " << fmt(ev) << " (ratio "
       << period / ev << "); lambda(4,8,16,32) = " << lam.str() << (increasing ? "increasing" : "NOT increasing");
    return {period_ok && increasing, os.str()};
}

double direct_sigma_min(const AbelSolution& abel, double tau, int N) {
    Eigen::MatrixXcd G(N, N);
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            const int k = n - m;
            if (k == 0) {
                G(n, m) = abel.phi(tau) - abel.phi(0.0);
            } else {
                const std::complex<double> ik(0.0, 2.0 * kPi * k);
                G(n, m) = (std::exp(ik * abel.phi(tau)) - std::exp(ik * abel.phi(0.0))) / ik;
            }
        }
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(G, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Outcome gram_sharpness() {
    bool ok = true;
    std::ostringstream os;
    for (auto [family, eps] : {std::pair{Family::Linear, 0.5}, std::pair{Family::Parabolic, 1.0}}) {
        Problem p(BoundaryCurve::make(family, eps));
        const double g0 = p.maps.gamma(0.0);
        const double full = gram_analysis(p.abel, g0, 32).sigma_min;
        const double full_oracle = direct_sigma_min(p.abel, g0, 32);
        ok = ok && full >= 1.0 - 1e-6 && std::abs(full - full_oracle) <= 1e-9;
        double prev = INFINITY, last = 0.0;
        for (int N : {4, 8, 16, 32}) {
            const double s = gram_analysis(p.abel, 0.5 * g0, N).sigma_min;
            const double o = direct_sigma_min(p.abel, 0.5 * g0, N);
            ok = ok && s <= prev && std::abs(s - o) <= 1e-9;
            prev = s;
            last = s;
        }
        ok = ok && last < 0.1;
        os << to_string(family) << ": sigma_min(gamma(0),32) " << fmt(full) << ", half window N=32 " << fmt(last)
           << "; ";
    }
    return {ok, os.str()};
}

Outcome orbit_asymptotics() {
    CharMaps lin(BoundaryCurve::linear(0.5));
    const auto o = orbit(lin, -1.0, 12);
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n) {
        const double target = 2.0 * std::pow(3.0, n) - 1.0;
        worst = std::max(worst, std::abs(o.values[n] - target) / target);
    }
    const bool linear_ok = worst <= 1e-12;

    CharMaps par(BoundaryCurve::parabolic(1.0));
    const auto po = orbit(par, -1.0, 200000);
    const double slope = po.loglog_slope;
    const bool slope_ok = std::abs(slope - 2.0) <= 0.05 * 2.0;

    std::ostringstream os;
    os << "linear x_n vs 2*3^n-1: max rel dev " << fmt(worst) << " (x_1.." << "x_3 = " << o.values[1] << ", "
       << o.values[2] << ", " << o.values[3] << "); parabolic log-log slope " << slope;
    return {linear_ok && slope_ok, os.str()};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {"closed_form_residuals", closed_form_residuals},
        {"solver_cross_validation", solver_cross_validation},
        {"orthonormality_parseval", orthonormality_parseval},
        {"norm_equivalence_energy_sandwich", norm_equivalence_energy_sandwich},
        {"energy_derivative", energy_derivative},
        {"left_boundary_identity", left_boundary_identity},
        {"right_boundary_inequality", right_boundary_inequality},
        {"interior_point", interior_point},
        {"moving_observer", moving_observer},
        {"simultaneous_observation", simultaneous_observation},
        {"gram_sharpness", gram_sharpness},
        {"orbit_asymptotics", orbit_asymptotics},
    };
    return list;
}

bool run_one(int index) {
    const auto& c = criteria()[index - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.run();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %02d %s (%.1fs): %s\n", out.pass ? "PASS" : "FAIL", index, c.name, secs, out.detail.c_str());
    std::fflush(stdout);
    return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = static_cast<int>(criteria().size());
    if (argc > 1) {
        const int index = std::atoi(argv[1]);
        if (index < 1 || index > n) {
            std::fprintf(stderr, "usage: acceptance [1..%d]\n", n);
            return 2;
        }
        return run_one(index) ? 0 : 1;
    }
    int failed = 0;
    for (int i = 1; i <= n; ++i) failed += run_one(i) ? 0 : 1;
    return failed == 0 ? 0 : 1;
}
