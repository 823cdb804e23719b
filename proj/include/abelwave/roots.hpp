#pragma once

#include <functional>

namespace abelwave {

struct RootOptions {
    /// Bracket width at which the iteration stops, relative to max(1, |t|).
    double width_tol = 1e-13;
    int max_iterations = 200;
};

/// Solves f(t) = target for a strictly increasing f on [lo, hi] with
/// f(lo) <= target <= f(hi). Newton steps are taken when they stay inside the
/// current bracket, bisection otherwise. Stops when the bracket or a Newton
/// step falls below width_tol; throws ConvergenceError at the iteration cap.
double solve_increasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime, double target, double lo,
                        double hi, const RootOptions& opt = {});

/// Plain bisection to `tol`; used as an independent oracle in tests.
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double tol);

}  // namespace abelwave
