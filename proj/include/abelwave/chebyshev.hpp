#pragma once

#include <functional>
#include <span>
#include <vector>

namespace abelwave {

/// Piecewise Chebyshev approximant on [lower, upper].
///
/// Each panel stores the coefficients of a Chebyshev series in the panel's
/// local variable. `fit` bisects panels until the trailing coefficients fall
/// below `tol` relative to the sampled magnitude, so smooth functions are
/// represented to near machine precision with few samples. Derivatives and
/// antiderivatives act on the coefficients directly.
class PiecewiseChebyshev {
public:
    struct Options {
        int degree = 24;
        double tol = 1e-13;
        /// Absolute floor for the magnitude the tolerance refers to.
        double scale_floor = 1e-300;
        double min_width = 1e-7;
        int max_panels = 4096;
    };

    PiecewiseChebyshev() = default;

    static PiecewiseChebyshev fit(const std::function<double(double)>& f, double lower,
                                  double upper, const Options& opt);
    static PiecewiseChebyshev fit(const std::function<double(double)>& f, double lower,
                                  double upper) {
        return fit(f, lower, upper, Options{});
    }

    double operator()(double x) const;

    PiecewiseChebyshev derivative() const;
    /// Continuous antiderivative taking `value_at_lower` at the left end.
    PiecewiseChebyshev antiderivative(double value_at_lower = 0.0) const;

    double lower() const { return breaks_.empty() ? 0.0 : breaks_.front(); }
    double upper() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
    std::size_t panels() const { return coeffs_.size(); }
    /// False when some panel hit min_width or max_panels before converging.
    bool resolved() const { return resolved_; }
    int evaluations() const { return evaluations_; }
    std::span<const double> breaks() const { return breaks_; }

private:
    std::vector<double> breaks_;
    std::vector<std::vector<double>> coeffs_;
    bool resolved_ = true;
    int evaluations_ = 0;
};

}  // namespace abelwave
