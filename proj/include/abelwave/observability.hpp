#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abelwave/wave.hpp"

namespace abelwave {

enum class ObservationKind { LeftBoundary, RightBoundary, InteriorPoint, MovingObserver, Simultaneous };

std::string to_string(ObservationKind kind);

/// Comparison of a quadrature value against a closed series expression.
struct IdentityCheck {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

IdentityCheck make_identity(std::string name, double computed, double expected, double tolerance);

struct ObservationReport {
    ObservationKind kind = ObservationKind::LeftBoundary;
    /// Observation point for interior and moving observers, NaN otherwise.
    double a = 0.0;
    double tau = 0.0;
    /// Window length at which the stated inequality is claimed.
    double tau_optimal = 0.0;
    double integral = 0.0;
    /// ‖(g, f)‖² of the truncated solution, the norm the bounds refer to.
    double norm_squared = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    /// The lower estimate is asserted for τ ≥ tau_optimal, the upper one for
    /// τ ≤ tau_optimal.
    bool lower_applies = true;
    bool upper_applies = true;
    bool lower_holds = false;
    bool upper_holds = false;
    /// C1, C2 and the extrema and auxiliary numbers they are built from.
    std::map<std::string, double> constants;
    std::vector<IdentityCheck> identities;
    /// Additional integrals (u_t variants, weighted forms, ...).
    std::map<std::string, double> values;
    std::vector<std::string> notes;
    double tolerance = 0.0;
    bool pass = false;

    bool identities_pass() const;
};

struct ObserveOptions {
    double quad_tol = 1e-10;
    /// Relative slack on the inequality checks and identity comparisons.
    double check_tol = 1e-6;
    double identity_tol = 1e-5;
};

/// ∫₀^τ |u_x(0,t)|² dt against 2m(β⁻¹(0))/M(0)‖·‖² and 2M(β⁻¹(0))/m(0)‖·‖².
/// A non-positive τ selects the optimal time γ(0).
ObservationReport observe_left(const WaveField& field, double tau, const ObserveOptions& opt = {});

/// ∫₀^τ |u_x(s(t),t)|² dt with the constants built from m, M at 0 and
/// t₀ = β⁻¹(0) and ‖s′‖∞. A non-positive τ selects β⁻¹(1).
ObservationReport observe_right(const WaveField& field, double tau, const ObserveOptions& opt = {});

/// ∫₀^{τ_a} |u_x(a,t)|² dt with τ_a = a + γ(−a). Requires a monotone curve
/// and φ′ strictly monotone in the opposite direction.
ObservationReport observe_interior(const WaveField& field, double a, const ObserveOptions& opt = {});

/// ∫ |u_t(a s(t), t)|² dt over [0, 2/(1 − ε)] for the linear family.
ObservationReport observe_moving(const WaveField& field, double a, const ObserveOptions& opt = {});

/// Fixed string v on [−1, 0] with v(−1, t) = v(0, t) = 0, as a sine series.
class FixedString {
public:
    /// g̃, g̃′ and f̃ are functions on [−1, 0]; `modes` sine modes are kept.
    FixedString(std::function<double(double)> g, std::function<double(double)> g_prime,
                std::function<double(double)> f, int modes = 64);
    /// Fixed string data obtained by reflecting data on [0, 1] to [−1, 0].
    static FixedString from_data(const InitialData& data, int modes = 64);

    double v_x0(double t) const;
    double v(double x, double t) const;
    double v_t(double x, double t) const;
    double v_x(double x, double t) const;
    /// E_v(0) = ½∫(g̃′² + f̃²) of the truncated series.
    double energy() const;
    /// ‖(g̃, f̃)‖² computed directly from the data.
    double data_norm_squared() const { return data_norm_squared_; }
    int modes() const { return static_cast<int>(b_.size()); }

private:
    std::vector<double> b_;  // displacement sine coefficients
    std::vector<double> d_;  // velocity sine coefficients
    double data_norm_squared_ = 0.0;
};

struct HypothesisCheck {
    bool expansive = false;  ///< liminf γ′ > 1
    bool power_law = false;  ///< γ′ = 1 + a t^{−δ} + o(t^{−δ}), 0 < δ < 1, a > 0
    double liminf_gamma_prime = 0.0;
    double delta = 0.0;
    double a_coef = 0.0;
    bool holds() const { return expansive || power_law; }
};

HypothesisCheck simultaneous_hypotheses(const CharMaps& maps);

/// Number of orbit points t_n = γⁿ(0), n ≥ 1, with t_n ≤ τ.
int orbit_count(const CharMaps& maps, double tau);

/// λ(τ) = ∫₀^τ |u_x(0,t) + v_x(0,t)|² dt / (‖(g,f)‖² + ‖(g̃,f̃)‖²) with the
/// pieces of the lower estimate.
ObservationReport observe_simultaneous(const WaveField& field, const FixedString& fixed, double tau,
                                       const ObserveOptions& opt = {});

/// Smallest τ on `grid` with λ(τ) ≥ lambda, or NaN.
double minimal_time_for_lambda(const WaveField& field, const FixedString& fixed,
                               const std::vector<double>& grid, double lambda,
                               const ObserveOptions& opt = {});

struct GramResult {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool observable = false;
    Eigen::MatrixXcd gram;
};

/// Gram matrix of {e^{2πinφ}} in L²([0, τ], φ′ dt) for n = 0..N−1 and its
/// smallest eigenvalue; `observable` compares it to `threshold`.
GramResult gram_analysis(const AbelSolution& abel, double tau, int N, double threshold = 0.05);

/// Gram matrix of the interior traces ψₙ(t) = φ′(t+a)e^{2πinφ(t+a)} +
/// φ′(t−a)e^{2πinφ(t−a)}, n = 1..N, on [0, τ].
GramResult interior_gram_analysis(const AbelSolution& abel, double a, double tau, int N,
                                  double threshold = 0.05);

}  // namespace abelwave
