#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "abelwave/error.hpp"
#include "abelwave/quadrature.hpp"
#include "abelwave/wave.hpp"

using namespace abelwave;

namespace {

constexpr double kPi = std::numbers::pi;

double linear_phi(double eps, double x) {
    return std::log((1.0 + eps * x) / (1.0 - eps)) / std::log((1.0 + eps) / (1.0 - eps));
}

struct Solved {
    CharMaps maps;
    AbelSolution abel;
    explicit Solved(BoundaryCurve c) : maps(std::move(c)), abel(closed_form(maps)) {}
};

}  // namespace

TEST(InitialData, PresetsSatisfyBoundaryConditions) {
    std::mt19937_64 rng(3);
    for (const auto& d : {InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5), InitialData::polynomial(1.0, 1.0),
                          InitialData::sine(3), InitialData::random_bump(rng)}) {
        EXPECT_NO_THROW(d.validate());
        EXPECT_NEAR(d.g(0.0), 0.0, 1e-14);
        EXPECT_NEAR(d.g(1.0), 0.0, 1e-14);
    }
}

TEST(InitialData, SobolevNormOfPolynomial) {
    // g = x(1 − x): ∫g′² = 1/3, f = x(1 − x): ∫f² = 1/30.
    EXPECT_NEAR(sobolev_norm_squared(InitialData::polynomial(1.0, 1.0)), 1.0 / 3.0 + 1.0 / 30.0, 1e-12);
    // g = sin(2πx): ∫g′² = 2π².
    EXPECT_NEAR(sobolev_norm_squared(InitialData::sine(2)), 2.0 * kPi * kPi, 1e-10);
}

TEST(Fold, ProfileReproducesData) {
    const auto data = InitialData::polynomial(1.0, 2.0);
    const auto p = fold(data);
    for (double x = 0.0; x <= 1.0; x += 0.05) {
        EXPECT_NEAR(p.h(x) - p.h(-x), data.g(x), 1e-13);
        // F(x) = x²− 2x³/3 for f = 2x(1 − x).
        EXPECT_NEAR(p.h(x) + p.h(-x), x * x - 2.0 * x * x * x / 3.0, 1e-12);
    }
}

TEST(Coefficients, SingleModeData) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto c = coefficients(fold(InitialData::single_mode(s.abel, 3)), s.abel, 8);
    for (int n = -8; n <= 8; ++n) {
        if (n == 0) continue;  // constant mode, invisible in u
        const double expected = (std::abs(n) == 3) ? 0.5 : 0.0;
        EXPECT_NEAR(std::abs(c[n] - cplx(expected, 0.0)), 0.0, 1e-9) << n;
    }
}

TEST(Coefficients, OrthonormalExpansionOfCosine) {
    // cos(2πφ) has A_{±1} = 1/2 in any normalization of φ on [−1, 1].
    Solved s(BoundaryCurve::parabolic(1.0));
    FoldedProfile p;
    p.h = [&](double x) { return std::cos(2.0 * kPi * s.abel.phi(x)); };
    p.h_prime = [&](double x) { return -2.0 * kPi * s.abel.phi_prime(x) * std::sin(2.0 * kPi * s.abel.phi(x)); };
    p.breaks = {0.0};
    const auto c = coefficients(p, s.abel, 4);
    EXPECT_NEAR(std::abs(c[1] - 0.5), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(c[-1] - 0.5), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(c[2]), 0.0, 1e-9);
}

TEST(WaveField, SingleModeMatchesExplicitFormula) {
    const double eps = 0.5;
    Solved s(BoundaryCurve::linear(eps));
    const cplx a(0.3, -0.2);
    WaveField field(s.maps, s.abel, ModeCoefficients::from_values(2, {{2, a}}));
    for (double t = 0.0; t <= 6.0; t += 0.7) {
        for (double r = 0.0; r <= 1.0; r += 0.25) {
            const double x = r * (1.0 + eps * t);
            const auto e = [&](double y) { return std::exp(cplx(0.0, 4.0 * kPi * linear_phi(eps, y))); };
            const cplx u = a * (e(t + x) - e(t - x));
            EXPECT_LT(std::abs(field.evaluate(x, t).u - u), 1e-12);
        }
    }
}

TEST(WaveField, InitialAndBoundaryConditions) {
    const std::pair<Family, double> cases[] = {{Family::Linear, 0.5}, {Family::Parabolic, 1.0}, {Family::Shrinking, 0.5}};
    for (auto [family, eps] : cases) {
        Solved s(BoundaryCurve::make(family, eps));
        const auto data = InitialData::bump(0.5, 0.4, 1.0, 0.5, 0.4, 0.5);
        const auto field = make_field(s.maps, s.abel, data, 128);
        for (double x = 0.05; x < 1.0; x += 0.1) {
            const auto v = field.evaluate(x, 0.0);
            EXPECT_NEAR(v.u.real(), data.g(x), 1e-4) << to_string(family);
            EXPECT_NEAR(v.u_t.real(), data.f(x), 1e-2) << to_string(family);
            EXPECT_NEAR(v.u.imag(), 0.0, 1e-10);
        }
        for (double t = 0.0; t <= 5.0; t += 0.5) {
            EXPECT_LT(std::abs(field.evaluate(0.0, t).u), 1e-12);
            EXPECT_LT(std::abs(field.evaluate(s.maps.curve().s(t), t).u), 1e-10);
        }
    }
}

TEST(WaveField, InitialTraceConvergesWithModes) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto data = InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5);
    auto error = [&](int N) {
        const auto field = make_field(s.maps, s.abel, data, N);
        double e = 0.0;
        for (double x = 0.05; x < 1.0; x += 0.01) e = std::max(e, std::abs(field.evaluate(x, 0.0).u.real() - data.g(x)));
        return e;
    };
    const double e32 = error(32), e64 = error(64), e128 = error(128);
    EXPECT_LT(e64, e32 / 4.0);
    EXPECT_LT(e128, e64 / 4.0);
}

TEST(WaveField, SatisfiesWaveEquation) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto field = make_field(s.maps, s.abel, InitialData::polynomial(1.0, 1.0), 24);
    const double h = 1e-3;
    for (double t = 0.5; t < 4.0; t += 0.6) {
        for (double x = 0.2; x < 1.0; x += 0.3) {
            const auto u = [&](double xx, double tt) { return field.evaluate(xx, tt, FieldComponent::U); };
            const cplx utt = (u(x, t + h) - 2.0 * u(x, t) + u(x, t - h)) / (h * h);
            const cplx uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
            EXPECT_LT(std::abs(utt - uxx), 1e-3 * (1.0 + std::abs(uxx)));
        }
    }
}

TEST(WaveField, RejectsPointsOutsideDomain) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto field = make_field(s.maps, s.abel, InitialData::sine(1), 8);
    EXPECT_THROW(field.evaluate(1.6, 1.0), DomainError);
    EXPECT_THROW(field.evaluate(-0.1, 1.0), DomainError);
    EXPECT_THROW(field.evaluate(0.5, -1.0), DomainError);
}

TEST(Energy, InitialEnergyIsHalfTheNorm) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto data = InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5);
    const auto field = make_field(s.maps, s.abel, data, 64);
    EXPECT_NEAR(2.0 * energy(field, 0.0), field.initial_norm_squared(), 1e-8 * field.initial_norm_squared());
    EXPECT_NEAR(field.initial_norm_squared(), sobolev_norm_squared(data), 2e-3 * sobolev_norm_squared(data));
}

TEST(Energy, RateMatchesFiniteDifferenceAndSignLaw) {
    const std::pair<Family, double> cases[] = {{Family::Linear, 0.5}, {Family::Shrinking, 0.5}};
    for (auto [family, eps] : cases) {
        Solved s(BoundaryCurve::make(family, eps));
        const auto field = make_field(s.maps, s.abel, InitialData::bump(0.5, 0.25, 1.0, 0.45, 0.2, 0.5), 64);
        for (double t = 0.3; t < 3.0; t += 0.45) {
            const double h = 1e-4;
            const double fd = (energy(field, t + h) - energy(field, t - h)) / (2.0 * h);
            const double rate = energy_rate(field, t);
            EXPECT_NEAR(fd, rate, std::max(1e-4, 1e-2 * std::abs(rate))) << to_string(family) << " t=" << t;
            if (std::abs(rate) > 1e-8) {
                EXPECT_EQ(rate > 0, s.maps.curve().s_prime(t) < 0) << to_string(family);
            }
        }
    }
}

TEST(Gram, ClosedFormEntries) {
    // ∫ e^{2πikφ}φ′ dx = (e^{2πikφ(b)} − e^{2πikφ(a)})/(2πik).
    Solved s(BoundaryCurve::parabolic(1.0));
    const double lo = 0.3, hi = 2.9;
    const auto G = exponential_gram(s.abel, lo, hi, 5);
    for (int n = 0; n < 5; ++n) {
        for (int m = 0; m < 5; ++m) {
            const int k = n - m;
            cplx expected;
            if (k == 0) {
                expected = s.abel.phi(hi) - s.abel.phi(lo);
            } else {
                const cplx ik(0.0, 2.0 * kPi * k);
                expected = (std::exp(ik * s.abel.phi(hi)) - std::exp(ik * s.abel.phi(lo))) / ik;
            }
            EXPECT_LT(std::abs(G(n, m) - expected), 1e-10);
        }
    }
}

TEST(Gram, OnePeriodWindowIsOrthonormal) {
    Solved s(BoundaryCurve::shrinking(0.5));
    for (double c : {-1.0, 0.0, 1.7}) {
        const auto G = exponential_gram(s.abel, c, s.maps.gamma(c), 9);
        EXPECT_LT((G - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(PhiExtrema, LinearIsMonotone) {
    Solved s(BoundaryCurve::linear(0.5));
    const auto e = phi_extrema(s.abel, s.maps, 2.0);
    // φ′ decreasing: max at β(2) = 0, min at α(2) = 4.
    EXPECT_NEAR(e.M, s.abel.phi_prime(0.0), 1e-12);
    EXPECT_NEAR(e.m, s.abel.phi_prime(4.0), 1e-12);
}

TEST(FunctionExtrema, InteriorMaximum) {
    const auto e = function_extrema([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
    EXPECT_NEAR(e.M, 0.0, 1e-12);
    EXPECT_NEAR(e.m, -0.49, 1e-12);
}
