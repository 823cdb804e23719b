#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "abelwave/error.hpp"

namespace abelwave::quad {

/// Fixed 15-point Gauss–Legendre rule on [-1, 1].
struct GaussLegendre15 {
    static constexpr int kPoints = 15;
    std::array<double, kPoints> nodes{};
    std::array<double, kPoints> weights{};

    static const GaussLegendre15& instance();
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.template lpNorm<Eigen::Infinity>();
}

template <class T>
struct Panel {
    double a;
    double b;
    T left;
    T right;
    double error;
    double magnitude;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
auto gauss15(F& f, double a, double b, double& abs_integral, int& evaluations) {
    const auto& rule = GaussLegendre15::instance();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    using T = std::decay_t<decltype(f(mid))>;
    T sum = f(mid + half * rule.nodes[0]);
    double abs_sum = magnitude(sum) * rule.weights[0];
    sum *= rule.weights[0];
    for (int i = 1; i < GaussLegendre15::kPoints; ++i) {
        T v = f(mid + half * rule.nodes[i]);
        abs_sum += magnitude(v) * rule.weights[i];
        sum += rule.weights[i] * v;
    }
    evaluations += GaussLegendre15::kPoints;
    abs_integral = abs_sum * half;
    sum *= half;
    return sum;
}

}  // namespace detail

struct Options {
    /// Stop when the summed panel error is below rel_tol · ∫|f|.
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int initial_panels = 4;
    int max_panels = 200000;
    /// Throw ConvergenceError instead of returning converged = false.
    bool throw_on_failure = true;
};

template <class T>
struct Result {
    T value;
    double error = 0.0;
    /// Estimate of ∫|f|, the scale the relative tolerance refers to.
    double magnitude = 0.0;
    int evaluations = 0;
    int panels = 0;
    bool converged = false;
};

/// Globally adaptive composite Gauss–Legendre quadrature with 15-point panels.
/// A panel's error is |G(whole) − G(left) − G(right)|; the worst panel is
/// bisected until the summed error meets the tolerance.
/// Works for real, complex and Eigen-vector valued integrands.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    if (!(b > a)) {
        out.value = f(a) * 0.0;
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Panel<T>> heap;
    const int n0 = std::max(1, opt.initial_panels);
    const double width0 = (b - a) / n0;
    double total_error = 0.0;
    double total_magnitude = 0.0;
    auto make_panel = [&](double pa, double pb, const T* whole) {
        double m_whole = 0.0, m_l = 0.0, m_r = 0.0;
        const double pm = 0.5 * (pa + pb);
        T w = whole ? *whole : detail::gauss15(f, pa, pb, m_whole, out.evaluations);
        T l = detail::gauss15(f, pa, pm, m_l, out.evaluations);
        T r = detail::gauss15(f, pm, pb, m_r, out.evaluations);
        T diff = w - l - r;
        return detail::Panel<T>{pa, pb, std::move(l), std::move(r), detail::magnitude(diff),
                                m_l + m_r};
    };
    for (int i = 0; i < n0; ++i) {
        const double pa = a + i * width0;
        const double pb = (i + 1 == n0) ? b : a + (i + 1) * width0;
        auto p = make_panel(pa, pb, nullptr);
        total_error += p.error;
        total_magnitude += p.magnitude;
        heap.push(std::move(p));
    }
    while (!heap.empty()) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * total_magnitude);
        if (total_error <= target) {
            out.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= opt.max_panels) break;
        detail::Panel<T> worst = heap.top();
        heap.pop();
        const double pm = 0.5 * (worst.a + worst.b);
        if (!(pm > worst.a && pm < worst.b)) {
            // Panel cannot be split further in floating point.
            heap.push(std::move(worst));
            break;
        }
        total_error -= worst.error;
        total_magnitude -= worst.magnitude;
        auto left = make_panel(worst.a, pm, &worst.left);
        auto right = make_panel(pm, worst.b, &worst.right);
        total_error += left.error + right.error;
        total_magnitude += left.magnitude + right.magnitude;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }
    out.panels = static_cast<int>(heap.size());
    out.error = total_error;
    out.magnitude = total_magnitude;
    bool first = true;
    while (!heap.empty()) {
        const auto& p = heap.top();
        if (first) {
            out.value = p.left + p.right;
            first = false;
        } else {
            out.value += p.left + p.right;
        }
        heap.pop();
    }
    if (!out.converged && opt.throw_on_failure) {
        throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                   ", " + std::to_string(b) + "]",
                               out.error);
    }
    return out;
}

/// Convenience wrapper returning only the value.
template <class F>
auto integral(F&& f, double a, double b, const Options& opt = {}) {
    return integrate(std::forward<F>(f), a, b, opt).value;
}

}  // namespace abelwave::quad
