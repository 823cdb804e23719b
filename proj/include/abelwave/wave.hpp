#pragma once

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abelwave/abel.hpp"
#include "abelwave/boundary.hpp"

namespace abelwave {

using cplx = std::complex<double>;

enum class Smoothness { CompactlySupported, H10xL2 };

/// Initial displacement g and velocity f on [0, 1].
struct InitialData {
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
    std::function<double(double)> f;
    /// Optional exact antiderivative of f with F(0) = 0; tabulated when empty.
    std::function<double(double)> F;
    Smoothness smoothness = Smoothness::H10xL2;
    /// Declared support [support_lo, support_hi] for compactly supported data.
    double support_lo = 0.0;
    double support_hi = 1.0;
    std::string label;

    /// Checks g(0) = g(1) = 0 within 1e-12 and the declared support.
    void validate() const;

    static InitialData zero();
    /// g = amplitude·ψ((x − c)/w), f = velocity·ψ((x − c_f)/w_f) with the
    /// standard bump ψ(r) = exp(−1/(1 − r²)) on |r| < 1.
    static InitialData bump(double center, double width, double amplitude, double f_center,
                            double f_width, double velocity);
    /// g = amplitude·x(1 − x), f = velocity·x(1 − x).
    static InitialData polynomial(double amplitude, double velocity);
    /// g = sin(kπx), f = 0.
    static InitialData sine(int k);
    /// Data whose folded profile is h = cos(2πnφ), so that A_{±n} = 1/2.
    static InitialData single_mode(const AbelSolution& abel, int n);
    /// Three column CSV (x, g, f) interpolated by cubic splines.
    static InitialData from_csv(const std::string& path);
    /// Random bump pair with supports inside [0.05, 0.95].
    static InitialData random_bump(std::mt19937_64& rng);
};

/// Folded profile h on [−1, 1] with F(x) = ∫₀ˣ f.
struct FoldedProfile {
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    std::function<double(double)> F;
    /// Points where h may fail to be smooth (0 and the support ends).
    std::vector<double> breaks;
};

FoldedProfile fold(const InitialData& data);

/// ‖g′‖²_{L²(0,1)} + ‖f‖²_{L²(0,1)}.
double sobolev_norm_squared(const InitialData& data);

/// Coefficients A_n for |n| ≤ N, stored at index n + N.
struct ModeCoefficients {
    int N = 0;
    Eigen::VectorXcd A;
    /// Estimate of Σ_{|n|>N} n²|A_n|² from the decay of the computed modes.
    double weighted_tail = 0.0;
    /// Quadrature error estimate of the coefficient integrals (max norm).
    double quadrature_error = 0.0;

    cplx operator[](int n) const { return A[n + N]; }
    /// Σ n²|A_n|² over the computed modes.
    double weighted_sum() const;
    /// Σ |A_n|² over the computed modes.
    double sum_squares() const;

    static ModeCoefficients from_values(int N, const std::vector<std::pair<int, cplx>>& values);
};

struct CoefficientOptions {
    double rel_tol = 1e-12;
};

/// A_n = ∫_{−1}^{1} h(x) e^{−2πinφ(x)} φ′(x) dx, the coordinates of h in the
/// orthonormal system bₙ = e^{2πinφ} of L²(φ′ dx).
ModeCoefficients coefficients(const FoldedProfile& profile, const AbelSolution& abel, int N,
                              const CoefficientOptions& opt = {});

/// Estimate of Σ_{|n|>N} n²|A_n|² fitted on the last quarter of the modes.
double estimate_weighted_tail(const Eigen::VectorXcd& A, int N);

struct FieldValue {
    cplx u;
    cplx u_x;
    cplx u_t;
};

enum class FieldComponent { U, Ux, Ut };

/// Truncated series u(x,t) = Σ Aₙ(e^{2πinφ(t+x)} − e^{2πinφ(t−x)}).
class WaveField {
public:
    WaveField(CharMaps maps, AbelSolution abel, ModeCoefficients coefficients);

    const CharMaps& maps() const { return maps_; }
    const BoundaryCurve& curve() const { return maps_.curve(); }
    const AbelSolution& abel() const { return abel_; }
    const ModeCoefficients& coefficients() const { return coeffs_; }

    /// Throws DomainError unless 0 ≤ x ≤ s(t) and 0 ≤ t ≤ horizon.
    FieldValue evaluate(double x, double t) const;
    cplx evaluate(double x, double t, FieldComponent what) const;
    /// Same sums without the domain check, for traces along curves that may
    /// touch the boundary up to rounding.
    FieldValue evaluate_unchecked(double x, double t) const;

    /// ‖(u(·,0), u_t(·,0))‖²_{H₀¹×L²} = 2E(0) of the truncated solution.
    double initial_norm_squared() const { return initial_norm_squared_; }

private:
    CharMaps maps_;
    AbelSolution abel_;
    ModeCoefficients coeffs_;
    double initial_norm_squared_ = 0.0;
};

WaveField make_field(const CharMaps& maps, const AbelSolution& abel, const InitialData& data,
                     int N, const CoefficientOptions& opt = {});

/// E(t) = ½∫₀^{s(t)} |u_x|² + |u_t|² dx.
double energy(const WaveField& field, double t, double rel_tol = 1e-11);

/// (s′/2)(s′² − 1)|u_x(s(t), t)|², the rate of change of the energy.
double energy_rate(const WaveField& field, double t);

struct Extrema {
    double m;
    double M;
};

/// min and max of φ′ on [β(t), α(t)].
Extrema phi_extrema(const AbelSolution& abel, const CharMaps& maps, double t);
/// min and max of a function on [lo, hi] by dense sampling refined by golden
/// section search around the best samples.
Extrema function_extrema(const std::function<double(double)>& f, double lo, double hi,
                         int samples = 257);

/// Matrix G_{nm} = ∫_lo^hi e^{2πi(n−m)φ} φ′ dx for n, m = 0..size−1.
Eigen::MatrixXcd exponential_gram(const AbelSolution& abel, double lo, double hi, int size,
                                  double rel_tol = 1e-12);

}  // namespace abelwave
