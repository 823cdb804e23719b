#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "abelwave/abel.hpp"
#include "abelwave/error.hpp"

using namespace abelwave;

namespace {

// Independent solutions of φ(t + s) − φ(t − s) = 1, normalized to φ(−1) = 0.
double linear_phi(double eps, double x) {
    const double eta = std::log((1.0 + eps) / (1.0 - eps));
    return (std::log(1.0 + eps * x) - std::log(1.0 - eps)) / eta;
}

double parabolic_phi(double eps, double x) {
    auto raw = [eps](double y) { return std::sqrt(eps * eps + 4.0 * eps * y + 4.0) / (2.0 * eps); };
    return raw(x) - raw(-1.0);
}

double shrinking_phi(double eps, double x) {
    auto raw = [eps](double y) { return 0.25 * eps * (y + 1.0 / eps) * (y + 1.0 / eps); };
    return raw(x) - raw(-1.0);
}

double max_difference(const AbelSolution& a, const std::function<double(double)>& b, double lo, double hi) {
    double err = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = lo + (hi - lo) * i / 400.0;
        err = std::max(err, std::abs(a.phi(x) - b(x)));
    }
    return err;
}

}  // namespace

TEST(LinearEta, Value) {
    EXPECT_NEAR(linear_eta(0.5), std::log(3.0), 1e-15);
}

TEST(ClosedForm, MatchesHandDerivedSolutions) {
    for (double eps : {0.25, 0.5}) {
        CharMaps m(BoundaryCurve::linear(eps));
        const auto sol = closed_form(m);
        EXPECT_LT(max_difference(sol, [eps](double x) { return linear_phi(eps, x); }, -1.0, 30.0), 1e-13);
    }
    {
        CharMaps m(BoundaryCurve::parabolic(1.0));
        const auto sol = closed_form(m);
        EXPECT_LT(max_difference(sol, [](double x) { return parabolic_phi(1.0, x); }, -1.0, 30.0), 1e-13);
    }
    {
        CharMaps m(BoundaryCurve::shrinking(0.5));
        const auto sol = closed_form(m);
        EXPECT_LT(max_difference(sol, [](double x) { return shrinking_phi(0.5, x); }, -1.0, 10.0), 1e-13);
    }
}

TEST(ClosedForm, SatisfiesAbelEquationForEveryFamily) {
    const std::pair<Family, double> cases[] = {{Family::Linear, 0.3},     {Family::Parabolic, 0.7},
                                               {Family::Hyperbolic, 2.0}, {Family::Shrinking, 0.4}};
    for (auto [family, eps] : cases) {
        CharMaps m(BoundaryCurve::make(family, eps));
        const auto sol = closed_form(m);
        EXPECT_TRUE(sol.certified());
        EXPECT_NEAR(sol.phi(-1.0), 0.0, 1e-15);
        EXPECT_NEAR(sol.phi(1.0), 1.0, 1e-13);
        for (double t = 0.0; t <= 10.0; t += 0.01) {
            const double s = m.curve().s(t);
            EXPECT_NEAR(sol.phi(t + s) - sol.phi(t - s), 1.0, 1e-12) << to_string(family) << " t=" << t;
        }
    }
}

TEST(ClosedForm, DerivativeMatchesFiniteDifference) {
    CharMaps m(BoundaryCurve::parabolic(1.5));
    const auto sol = closed_form(m);
    for (double x = -0.9; x < 20.0; x += 0.7) {
        const double h = 1e-6;
        EXPECT_NEAR(sol.phi_prime(x), (sol.phi(x + h) - sol.phi(x - h)) / (2.0 * h), 1e-8);
        EXPECT_GT(sol.phi_prime(x), 0.0);
    }
}

TEST(ClosedForm, CustomCurveIsUnsupported) {
    CharMaps m(BoundaryCurve::custom([](double t) { return 1.0 + 0.1 * t; }, [](double) { return 0.1; }, {}));
    EXPECT_THROW(closed_form(m), UnsupportedError);
}

TEST(ProductExpansive, MatchesLinearClosedForm) {
    for (double eps : {0.25, 0.5}) {
        CharMaps m(BoundaryCurve::linear(eps));
        const auto sol = product_expansive(m);
        EXPECT_TRUE(sol.certified()) << sol.residual_sup;
        EXPECT_LT(max_difference(sol, [eps](double x) { return linear_phi(eps, x); }, -1.0, 20.0), 1e-5);
    }
}

TEST(ProductExpansive, RejectsParabolicCurve) {
    CharMaps m(BoundaryCurve::parabolic(1.0));
    EXPECT_THROW(product_expansive(m), HypothesisError);
}

TEST(ProductParabolic, MatchesParabolicClosedForm) {
    CharMaps m(BoundaryCurve::parabolic(1.0));
    const auto sol = product_parabolic(m);
    EXPECT_LT(max_difference(sol, [](double x) { return parabolic_phi(1.0, x); }, -1.0, 20.0), 1e-5);
    EXPECT_NEAR(sol.diagnostics.at("delta"), 0.5, 0.05);
}

TEST(Levy, MatchesShrinkingClosedForm) {
    CharMaps m(BoundaryCurve::shrinking(0.5));
    const auto sol = levy(m);
    EXPECT_LT(max_difference(sol, [](double x) { return shrinking_phi(0.5, x); }, -1.0, 10.0), 1e-4);
}

TEST(Levy, RejectsExpansiveCurve) {
    EXPECT_THROW(levy(CharMaps(BoundaryCurve::linear(0.5))), ConvergenceError);
}

TEST(Levy, TranslationIsSolvedExactly) {
    // s ≡ 1 gives γ(y) = y + 2 and φ(x) = (x + 1)/2.
    CharMaps m(BoundaryCurve::custom([](double) { return 1.0; }, [](double) { return 0.0; },
                                     [](double) { return 0.0; }));
    const auto sol = solve_abel(m, std::nullopt);
    EXPECT_EQ(sol.method, AbelMethod::Levy);
    EXPECT_LT(max_difference(sol, [](double x) { return 0.5 * (x + 1.0); }, -1.0, 10.0), 1e-8);
}

TEST(SolveAbel, AutomaticSelection) {
    EXPECT_EQ(solve_abel(CharMaps(BoundaryCurve::linear(0.5)), std::nullopt).method, AbelMethod::ClosedForm);
    CharMaps custom(BoundaryCurve::custom([](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; },
                                          [](double) { return 0.0; }));
    const auto sol = solve_abel(custom, std::nullopt);
    EXPECT_EQ(sol.method, AbelMethod::ProductExpansive);
    EXPECT_LT(max_difference(sol, [](double x) { return linear_phi(0.5, x); }, -1.0, 10.0), 1e-5);
}

TEST(SolveAbel, MethodNamesRoundTrip) {
    for (auto m : {AbelMethod::ClosedForm, AbelMethod::ProductExpansive, AbelMethod::ProductParabolic,
                   AbelMethod::Levy}) {
        EXPECT_EQ(abel_method_from_string(to_string(m)), m);
    }
    EXPECT_THROW(abel_method_from_string("newton"), ConfigError);
}

TEST(Orbit, LinearOrbitOfMinusOne) {
    CharMaps m(BoundaryCurve::linear(0.5));
    const auto o = orbit(m, -1.0, 12);
    ASSERT_EQ(o.values.size(), 13u);
    // x_{n+1} = 3x_n + 4 from x_0 = −1 gives 3ⁿ − 2.
    for (int n = 0; n <= 12; ++n) EXPECT_NEAR(o.values[n], std::pow(3.0, n) - 2.0, 1e-12 * std::pow(3.0, n));
    EXPECT_EQ(o.growth, Growth::Exponential);
    EXPECT_NEAR(o.semilog_slope, std::log(3.0), 1e-3);
}

TEST(Orbit, ParabolicGrowsLikeSquare) {
    CharMaps m(BoundaryCurve::parabolic(1.0));
    const auto o = orbit(m, -1.0, 20000);
    EXPECT_EQ(o.growth, Growth::Polynomial);
    EXPECT_NEAR(o.loglog_slope, 2.0, 0.1);
}

TEST(Orbit, FitOfGammaTail) {
    const auto fit = fit_gamma_tail(CharMaps(BoundaryCurve::linear(0.5)));
    EXPECT_NEAR(fit.ell, 3.0, 1e-6);
}
