#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace abelwave {

enum class Family { Linear, Parabolic, Hyperbolic, Shrinking, Custom };

std::string to_string(Family family);
/// Accepts the lower-case names used on the command line ("linear", ...).
Family family_from_string(const std::string& name);

/// Admissible boundary x = s(t) of the time-dependent domain 0 <= x <= s(t).
///
/// Named families are normalized so that s(0) = 1; the hyperbolic family is
/// rescaled in x and t by its natural s(0). Construction checks the family's
/// parameter range, s(0) = 1, s > 0 and |s'| < 1 on a dense sample grid.
class BoundaryCurve {
public:
    using Fn = std::function<double(double)>;

    static BoundaryCurve make(Family family, double epsilon);
    static BoundaryCurve linear(double epsilon) { return make(Family::Linear, epsilon); }
    static BoundaryCurve parabolic(double epsilon) { return make(Family::Parabolic, epsilon); }
    static BoundaryCurve hyperbolic(double epsilon) { return make(Family::Hyperbolic, epsilon); }
    static BoundaryCurve shrinking(double epsilon) { return make(Family::Shrinking, epsilon); }

    /// User supplied curve; `s_second` may be empty.
    static BoundaryCurve custom(Fn s, Fn s_prime, Fn s_second,
                                double domain_limit = std::numeric_limits<double>::infinity(),
                                std::string label = "custom");
    /// Custom curve interpolated from samples (t_i, s_i) by a cubic spline.
    static BoundaryCurve from_samples(std::vector<double> t, std::vector<double> s);

    Family family() const { return family_; }
    double epsilon() const { return epsilon_; }
    const std::string& label() const { return label_; }

    double s(double t) const { return s_(t); }
    double s_prime(double t) const { return s_prime_(t); }
    double s_second(double t) const;
    bool has_second() const { return static_cast<bool>(s_second_); }

    /// Sampled sup |s'| over [0, min(domain_limit, 200)].
    double sup_s_prime() const { return sup_s_prime_; }
    /// Largest t at which s is defined (infinite for the analytic families).
    double domain_limit() const { return domain_limit_; }
    /// Factor by which x and t were divided to bring s(0) to 1 (hyperbolic only).
    double time_scale() const { return time_scale_; }
    /// +1 if s is strictly increasing on the sample grid, -1 if strictly
    /// decreasing, 0 otherwise.
    int monotonicity() const { return monotonicity_; }

private:
    BoundaryCurve() = default;
    void validate();

    Family family_ = Family::Custom;
    double epsilon_ = 0.0;
    std::string label_;
    Fn s_, s_prime_, s_second_;
    double sup_s_prime_ = 0.0;
    double domain_limit_ = std::numeric_limits<double>::infinity();
    double time_scale_ = 1.0;
    int monotonicity_ = 0;
};

/// Characteristic maps alpha(t) = t + s(t), beta(t) = t - s(t) and
/// gamma = alpha ∘ beta⁻¹ : [-1, sup beta) -> [1, ∞).
class CharMaps {
public:
    explicit CharMaps(BoundaryCurve curve,
                      double horizon = std::numeric_limits<double>::infinity());

    const BoundaryCurve& curve() const { return curve_; }
    /// Largest admissible time argument.
    double horizon() const { return horizon_; }
    /// sup of beta over [0, horizon]; gamma and beta_inv require y below it.
    double beta_limit() const { return beta_limit_; }

    double alpha(double t) const;
    double beta(double t) const;
    double beta_inv(double y) const;
    double alpha_inv(double z) const;

    double gamma(double y) const;
    double gamma_inv(double z) const;
    double gamma_prime(double y) const;
    double gamma_second(double y) const;

    struct Step {
        double t;            ///< beta⁻¹(y)
        double value;        ///< gamma(y)
        double derivative;   ///< gamma'(y)
    };
    /// gamma and gamma' from a single root solve.
    Step step(double y) const;

private:
    void check_time(double t) const;
    double bracket_upper(double target, bool for_beta) const;

    BoundaryCurve curve_;
    double horizon_;
    double beta_limit_;
};

/// Optimal observation times. `right` is the time the characteristic leaving
/// (x = 1, t = 0) towards x = 0 reaches the moving wall after reflection,
/// i.e. the root of beta(τ) = 1. `right_literal` is gamma⁻¹(0), which is not
/// defined because gamma >= 1, and is always NaN; it is kept so reports can
/// show both readings. Infinite entries mean the characteristic never returns.
struct OptimalTimes {
    double left;
    double right;
    double right_literal;
    /// beta⁻¹(0), the time used by the boundary constants.
    double t0;
    std::function<double(double)> interior;
};

OptimalTimes optimal_times(const CharMaps& maps);
/// a + gamma(-a) for an interior observation point a in (0, 1).
double interior_time(const CharMaps& maps, double a);
/// Working horizon for sampled checks: 10 · gamma(0), or 10 when gamma(0) is
/// infinite.
double default_horizon(const CharMaps& maps);

}  // namespace abelwave
