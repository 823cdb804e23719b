#include "abelwave/roots.hpp"

#include <cmath>

#include "abelwave/error.hpp"

namespace abelwave {

double solve_increasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime, double target, double lo,
                        double hi, const RootOptions& opt) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo > 0.0 || fhi < 0.0) {
        throw DomainError("root not bracketed: target " + std::to_string(target) + " outside [" +
                          std::to_string(flo + target) + ", " + std::to_string(fhi + target) + "]");
    }
    double t = lo - flo * (hi - lo) / (fhi - flo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double ft = f(t) - target;
        if (ft == 0.0) return t;
        if (ft < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        const double scale = std::max(1.0, std::abs(t));
        if (hi - lo <= opt.width_tol * scale) return t;
        const double d = fprime ? fprime(t) : 0.0;
        double next = (d > 0.0) ? t - ft / d : 0.5 * (lo + hi);
        const bool newton = d > 0.0 && next > lo && next < hi;
        if (!newton) next = 0.5 * (lo + hi);
        const double step = next - t;
        t = next;
        if (newton && std::abs(step) <= opt.width_tol * scale) return t;
    }
    throw ConvergenceError("monotone root finder exceeded iteration cap", hi - lo);
}

double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double tol) {
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace abelwave
