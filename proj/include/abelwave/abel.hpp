#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abelwave/boundary.hpp"

namespace abelwave {

enum class AbelMethod { ClosedForm, ProductExpansive, ProductParabolic, Levy };

std::string to_string(AbelMethod method);
/// Accepts "closed", "product-expansive", "product-parabolic", "levy".
AbelMethod abel_method_from_string(const std::string& name);

/// Solution φ of φ(t + s(t)) − φ(t − s(t)) = 1, normalized so that φ(−1) = 0.
///
/// `phi` and `phi_prime` are valid on [lower, upper]. The raw solution before
/// normalization is phi(x) − normalization.
struct AbelSolution {
    std::function<double(double)> phi;
    std::function<double(double)> phi_prime;
    AbelMethod method = AbelMethod::ClosedForm;
    double normalization = 0.0;
    double lower = -1.0;
    double upper = 0.0;
    /// Horizon of the residual grid [0, t_max].
    double t_max = 0.0;
    double residual_sup = 0.0;
    /// Method tolerance the residual is certified against.
    double tolerance = 0.0;
    /// Solver specific numbers (ℓ, δ, product length, Lévy iteration, ...).
    std::map<std::string, double> diagnostics;

    bool certified() const { return residual_sup <= tolerance; }
};

/// sup |φ(α(t)) − φ(β(t)) − 1| over `points` equispaced t in [0, t_max].
double certify_residual(const AbelSolution& sol, const CharMaps& maps, double t_max,
                        int points = 2001);

struct AbelOptions {
    /// Target accuracy of the constructive solvers.
    double tol = 1e-6;
    /// Residual grid horizon; 0 selects default_horizon(maps).
    double t_max = 0.0;
    int residual_points = 2001;
    /// Overrides for the limit of γ' (expansive) and the tail model
    /// γ'(x) = 1 + a(1 − δ)x^{−δ} (parabolic).
    std::optional<double> ell;
    std::optional<double> delta;
    std::optional<double> a_coef;
    int max_terms = 200000;
    /// Lévy base point and iteration cap.
    double x0 = -1.0;
    int n_iter = 10000;
};

/// Tabulated solutions for the four named families; the hyperbolic entry
/// refers to the rescaled curve.
AbelSolution closed_form(const CharMaps& maps, const AbelOptions& opt = {});

/// Schröder-type product P(x) = ∏ γ'(γⁿ(x))/ℓ for lim γ' = ℓ > 1.
AbelSolution product_expansive(const CharMaps& maps, const AbelOptions& opt = {});

/// Product P(x) = ∏ g(xₙ)γ'(xₙ)/g(xₙ₊₁) with g = γ^{1−δ} for γ' → 1 with a
/// power law correction.
AbelSolution product_parabolic(const CharMaps& maps, const AbelOptions& opt = {});

/// Lévy quotient (γⁿ(x) − γⁿ(x₀))/(γⁿ⁺¹(x₀) − γⁿ(x₀)) with Richardson
/// extrapolation in n.
AbelSolution levy(const CharMaps& maps, const AbelOptions& opt = {});

/// Closed form for named families, otherwise the first constructive solver
/// whose hypotheses hold.
AbelSolution solve_abel(const CharMaps& maps, std::optional<AbelMethod> method,
                        const AbelOptions& opt = {});

enum class Growth { Exponential, Polynomial, Unknown };
std::string to_string(Growth growth);

struct OrbitSequence {
    double x0 = -1.0;
    std::vector<double> values;
    Growth growth = Growth::Unknown;
    /// Smallest x_{n+1}/x_n over the last quarter of the orbit.
    double tail_ratio = 0.0;
    /// Least squares slope of log xₙ against log n over the second half.
    double loglog_slope = 0.0;
    /// Least squares slope of log xₙ against n over the second half.
    double semilog_slope = 0.0;
    /// True when iteration stopped early because γ left its domain.
    bool truncated = false;
};

/// xₙ = γⁿ(x0) for n = 0..n_max.
OrbitSequence orbit(const CharMaps& maps, double x0, int n_max);

/// Fit of log(γ'(x) − 1) = log(a(1 − δ)) − δ log x on an orbit tail.
struct TailFit {
    double delta;
    double a_coef;
    double ell;
};
TailFit fit_gamma_tail(const CharMaps& maps, int n_max = 4000);

/// η = ln((1 + ε)/(1 − ε)), the period constant of the linear family.
double linear_eta(double epsilon);

}  // namespace abelwave
