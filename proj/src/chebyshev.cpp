#include "abelwave/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "abelwave/error.hpp"

namespace abelwave {

namespace {

// Coefficients of the degree-n interpolant through the Chebyshev–Lobatto
// points x_j = cos(pi j / n).
std::vector<double> lobatto_coefficients(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size()) - 1;
    std::vector<double> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            sum += w * values[j] * std::cos(std::numbers::pi * j * k / n);
        }
        c[k] = 2.0 * sum / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return c;
}

double clenshaw(const std::vector<double>& c, double t) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

}  // namespace

PiecewiseChebyshev PiecewiseChebyshev::fit(const std::function<double(double)>& f, double lower,
                                           double upper, const Options& opt) {
    if (!(upper > lower)) throw DomainError("Chebyshev fit needs lower < upper");
    PiecewiseChebyshev out;
    const int n = std::max(4, opt.degree);
    struct Pending {
        double a, b;
    };
    struct Done {
        double a, b;
        std::vector<double> c;
    };
    std::deque<Pending> todo{{lower, upper}};
    std::vector<Done> done;
    std::vector<double> values(n + 1);
    while (!todo.empty()) {
        auto [a, b] = todo.front();
        todo.pop_front();
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double scale = opt.scale_floor;
        for (int j = 0; j <= n; ++j) {
            values[j] = f(mid + half * std::cos(std::numbers::pi * j / n));
            if (!std::isfinite(values[j])) {
                throw DomainError("non-finite sample while fitting Chebyshev table at x = " +
                                  std::to_string(mid + half * std::cos(std::numbers::pi * j / n)));
            }
            scale = std::max(scale, std::abs(values[j]));
        }
        out.evaluations_ += n + 1;
        auto c = lobatto_coefficients(values);
        const double tail = std::max({std::abs(c[n]), std::abs(c[n - 1]), std::abs(c[n - 2])});
        const bool converged = tail <= opt.tol * scale;
        const int pending = static_cast<int>(done.size() + todo.size()) + 2;
        if (!converged && half * 2.0 > opt.min_width && pending <= opt.max_panels) {
            todo.push_back({a, mid});
            todo.push_back({mid, b});
            continue;
        }
        if (!converged) out.resolved_ = false;
        done.push_back({a, b, std::move(c)});
    }
    std::sort(done.begin(), done.end(), [](const Done& x, const Done& y) { return x.a < y.a; });
    out.breaks_.reserve(done.size() + 1);
    for (auto& d : done) {
        out.breaks_.push_back(d.a);
        out.coeffs_.push_back(std::move(d.c));
    }
    out.breaks_.push_back(upper);
    return out;
}

double PiecewiseChebyshev::operator()(double x) const {
    if (coeffs_.empty()) throw DomainError("evaluating an empty Chebyshev table");
    const double lo = breaks_.front(), hi = breaks_.back();
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (x < lo - slack || x > hi + slack) {
        throw DomainError("x = " + std::to_string(x) + " outside tabulated range [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    k = std::min(k, coeffs_.size() - 1);
    const double a = breaks_[k], b = breaks_[k + 1];
    const double t = std::clamp((2.0 * x - a - b) / (b - a), -1.0, 1.0);
    return clenshaw(coeffs_[k], t);
}

PiecewiseChebyshev PiecewiseChebyshev::derivative() const {
    PiecewiseChebyshev out = *this;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        const int n = static_cast<int>(c.size()) - 1;
        std::vector<double> d(std::max(1, n), 0.0);
        // d_{j-1} = d_{j+1} + 2 j c_j, with d_0 halved at the end.
        std::vector<double> dd(n + 2, 0.0);
        for (int j = n; j >= 1; --j) dd[j - 1] = dd[j + 1] + 2.0 * j * c[j];
        dd[0] *= 0.5;
        const double scale = 2.0 / (breaks_[k + 1] - breaks_[k]);
        for (int j = 0; j < std::max(1, n); ++j) d[j] = dd[j] * scale;
        out.coeffs_[k] = std::move(d);
    }
    return out;
}

PiecewiseChebyshev PiecewiseChebyshev::antiderivative(double value_at_lower) const {
    PiecewiseChebyshev out = *this;
    double running = value_at_lower;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        const int n = static_cast<int>(c.size()) - 1;
        const double half = 0.5 * (breaks_[k + 1] - breaks_[k]);
        std::vector<double> C(n + 2, 0.0);
        auto cj = [&](int j) { return (j >= 0 && j <= n) ? c[j] : 0.0; };
        C[1] = half * (2.0 * cj(0) - cj(2)) / 2.0;
        for (int j = 2; j <= n + 1; ++j) C[j] = half * (cj(j - 1) - cj(j + 1)) / (2.0 * j);
        // Fix C_0 so the panel starts at the running value (T_j(-1) = (-1)^j).
        double at_minus_one = 0.0;
        for (int j = 1; j <= n + 1; ++j) at_minus_one += (j % 2 == 0 ? 1.0 : -1.0) * C[j];
        C[0] = running - at_minus_one;
        double at_plus_one = 0.0;
        for (double v : C) at_plus_one += v;
        running = at_plus_one;
        out.coeffs_[k] = std::move(C);
    }
    return out;
}

}  // namespace abelwave
