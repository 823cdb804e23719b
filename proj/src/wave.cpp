#include "abelwave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <tuple>

#include "abelwave/chebyshev.hpp"
#include "abelwave/error.hpp"
#include "abelwave/quadrature.hpp"
#include "abelwave/spline.hpp"

namespace abelwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bump_profile(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double bump_slope(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    const double q = 1.0 - r * r;
    return bump_profile(r) * (-2.0 * r / (q * q));
}

// Integrates over [a, b] split at the given interior points.
template <class F>
auto split_integral(F&& f, double a, double b, std::vector<double> cuts, double rel_tol,
                    double* error = nullptr) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    quad::Options opt;
    opt.rel_tol = rel_tol;
    using T = std::decay_t<decltype(f(a))>;
    T total = f(a) * 0.0;
    double err = 0.0;
    double prev = a;
    for (double c : cuts) {
        c = std::clamp(c, a, b);
        if (c > prev) {
            auto r = quad::integrate(f, prev, c, opt);
            total += r.value;
            err += r.error;
            prev = c;
        }
    }
    if (error) *error = err;
    return total;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

}  // namespace

void InitialData::validate() const {
    if (!g || !g_prime || !f) throw ConfigError("initial data needs g, g' and f");
    if (std::abs(g(0.0)) > 1e-12 || std::abs(g(1.0)) > 1e-12) {
        throw DomainError("initial displacement violates g(0) = g(1) = 0 (g(0) = " +
                          std::to_string(g(0.0)) + ", g(1) = " + std::to_string(g(1.0)) + ")");
    }
    if (smoothness == Smoothness::CompactlySupported) {
        if (!(support_lo > 0.0 && support_hi < 1.0 && support_lo < support_hi)) {
            throw DomainError("declared support must lie inside (0, 1)");
        }
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            if ((x < support_lo || x > support_hi) && (g(x) != 0.0 || f(x) != 0.0)) {
                throw DomainError("initial data does not vanish outside its declared support");
            }
        }
    }
}

InitialData InitialData::zero() {
    InitialData d;
    d.g = [](double) { return 0.0; };
    d.g_prime = [](double) { return 0.0; };
    d.f = [](double) { return 0.0; };
    d.F = [](double) { return 0.0; };
    d.smoothness = Smoothness::CompactlySupported;
    d.support_lo = 0.25;
    d.support_hi = 0.75;
    d.label = "zero";
    return d;
}

InitialData InitialData::bump(double center, double width, double amplitude, double f_center,
                              double f_width, double velocity) {
    auto inside = [](double c, double w) { return w > 0.0 && c - w > 0.0 && c + w < 1.0; };
    if (!inside(center, width) || !inside(f_center, f_width)) {
        throw DomainError("bump supports must lie inside (0, 1)");
    }
    InitialData d;
    d.g = [=](double x) { return amplitude * bump_profile((x - center) / width); };
    d.g_prime = [=](double x) { return amplitude * bump_slope((x - center) / width) / width; };
    d.f = [=](double x) { return velocity * bump_profile((x - f_center) / f_width); };
    d.smoothness = Smoothness::CompactlySupported;
    d.support_lo = std::min(center - width, f_center - f_width);
    d.support_hi = std::max(center + width, f_center + f_width);
    d.label = "bump";
    return d;
}

InitialData InitialData::polynomial(double amplitude, double velocity) {
    InitialData d;
    d.g = [=](double x) { return amplitude * x * (1.0 - x); };
    d.g_prime = [=](double x) { return amplitude * (1.0 - 2.0 * x); };
    d.f = [=](double x) { return velocity * x * (1.0 - x); };
    d.F = [=](double x) { return velocity * (x * x / 2.0 - x * x * x / 3.0); };
    d.label = "polynomial";
    return d;
}

InitialData InitialData::sine(int k) {
    if (k < 1) throw DomainError("sine data needs k >= 1");
    const double w = k * std::numbers::pi;
    InitialData d;
    d.g = [w](double x) { return std::sin(w * x); };
    d.g_prime = [w](double x) { return w * std::cos(w * x); };
    d.f = [](double) { return 0.0; };
    d.F = [](double) { return 0.0; };
    d.label = "sine";
    return d;
}

InitialData InitialData::single_mode(const AbelSolution& abel, int n) {
    if (n < 1) throw DomainError("single mode data needs n >= 1");
    auto phi = abel.phi;
    auto dphi = abel.phi_prime;
    const double k = kTwoPi * n;
    auto h = [phi, k](double x) { return std::cos(k * phi(x)); };
    auto hp = [phi, dphi, k](double x) { return -k * dphi(x) * std::sin(k * phi(x)); };
    const double h0 = h(0.0);
    InitialData d;
    d.g = [h](double x) { return h(x) - h(-x); };
    d.g_prime = [hp](double x) { return hp(x) + hp(-x); };
    d.f = [hp](double x) { return hp(x) - hp(-x); };
    d.F = [h, h0](double x) { return h(x) + h(-x) - 2.0 * h0; };
    d.label = "single-mode";
    return d;
}

InitialData InitialData::from_csv(const std::string& path) {
    auto cols = read_csv_columns(path, 3);
    if (std::abs(cols[0].front()) > 1e-12 || std::abs(cols[0].back() - 1.0) > 1e-12) {
        throw ConfigError("initial data CSV must cover x in [0, 1]");
    }
    auto gs = std::make_shared<CubicSpline>(cols[0], cols[1]);
    auto fs = std::make_shared<CubicSpline>(cols[0], cols[2]);
    InitialData d;
    d.g = [gs](double x) { return (*gs)(x); };
    d.g_prime = [gs](double x) { return gs->derivative(x); };
    d.f = [fs](double x) { return (*fs)(x); };
    d.F = [fs](double x) { return fs->integral(x); };
    d.label = "csv:" + path;
    return d;
}

InitialData InitialData::random_bump(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> center(0.3, 0.7), width(0.15, 0.25), amp(0.2, 1.0),
        vel(0.2, 2.0), sign(-1.0, 1.0);
    const double c = center(rng), w = width(rng);
    const double a = amp(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
    const double cf = center(rng), wf = width(rng);
    const double v = vel(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
    auto d = bump(c, w, a, cf, wf, v);
    d.label = "random-bump";
    return d;
}

FoldedProfile fold(const InitialData& data) {
    data.validate();
    std::function<double(double)> F = data.F;
    if (!F) {
        PiecewiseChebyshev::Options opt;
        opt.tol = 1e-14;
        auto fit = PiecewiseChebyshev::fit(data.f, 0.0, 1.0, opt);
        auto anti = std::make_shared<const PiecewiseChebyshev>(fit.antiderivative(0.0));
        F = [anti](double x) { return (*anti)(x); };
    }
    FoldedProfile p;
    p.F = F;
    auto g = data.g, gp = data.g_prime, f = data.f;
    p.h = [g, F](double x) {
        return x >= 0.0 ? 0.5 * (g(x) + F(x)) : 0.5 * (-g(-x) + F(-x));
    };
    p.h_prime = [gp, f](double x) {
        return x >= 0.0 ? 0.5 * (gp(x) + f(x)) : 0.5 * (gp(-x) - f(-x));
    };
    p.breaks = {0.0};
    if (data.smoothness == Smoothness::CompactlySupported) {
        for (double b : {data.support_lo, data.support_hi}) {
            p.breaks.push_back(b);
            p.breaks.push_back(-b);
        }
    }
    if (std::abs(p.h(1.0) - p.h(-1.0)) > 1e-12) {
        throw DomainError("folded profile violates h(1) = h(-1)");
    }
    return p;
}

double sobolev_norm_squared(const InitialData& data) {
    std::vector<double> cuts;
    if (data.smoothness == Smoothness::CompactlySupported) cuts = {data.support_lo, data.support_hi};
    auto gp = data.g_prime;
    auto f = data.f;
    return split_integral([&](double x) { return gp(x) * gp(x) + f(x) * f(x); }, 0.0, 1.0, cuts, 1e-13);
}

double ModeCoefficients::weighted_sum() const {
    double s = 0.0;
    for (int n = -N; n <= N; ++n) s += double(n) * n * std::norm(A[n + N]);
    return s;
}

double ModeCoefficients::sum_squares() const { return A.squaredNorm(); }

ModeCoefficients ModeCoefficients::from_values(int N, const std::vector<std::pair<int, cplx>>& values) {
    if (N < 1) throw DomainError("mode count must be at least 1");
    ModeCoefficients c;
    c.N = N;
    c.A = Eigen::VectorXcd::Zero(2 * N + 1);
    for (const auto& [n, v] : values) {
        if (std::abs(n) > N) throw DomainError("mode index outside |n| <= N");
        c.A[n + N] = v;
    }
    return c;
}

double estimate_weighted_tail(const Eigen::VectorXcd& A, int N) {
    if (N < 8) return 0.0;
    std::vector<double> w(N + 1, 0.0);
    double peak = 0.0;
    for (int n = 1; n <= N; ++n) {
        w[n] = double(n) * n * (std::norm(A[N + n]) + std::norm(A[N - n]));
        peak = std::max(peak, w[n]);
    }
    if (peak == 0.0) return 0.0;
    // Modes below the quadrature noise floor carry no decay information.
    const double floor = 1e-24 * peak;
    const int first = N - N / 4 + 1;
    std::vector<double> ns, lns, lw;
    double quartile_sum = 0.0;
    for (int n = first; n <= N; ++n) {
        quartile_sum += w[n];
        if (w[n] > floor) {
            ns.push_back(n);
            lns.push_back(std::log(double(n)));
            lw.push_back(std::log(w[n]));
        }
    }
    if (ns.size() < 3) return quartile_sum;
    auto fit = [](const std::vector<double>& x, const std::vector<double>& y) {
        const double k = static_cast<double>(x.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i] / k;
            my += y[i] / k;
        }
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        const double slope = sxy / sxx;
        double ss = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - my - slope * (x[i] - mx);
            ss += r * r;
        }
        return std::tuple{slope, my - slope * mx, ss};
    };
    const auto [gs, gi, gres] = fit(ns, lw);
    const auto [ps, pi, pres] = fit(lns, lw);
    const double inf = std::numeric_limits<double>::infinity();
    if (gres <= pres) {
        if (!(gs < 0.0)) return inf;
        const double r = std::exp(gs);
        return std::exp(gi + gs * N) * r / (1.0 - r);
    }
    if (!(ps < -1.0)) return inf;
    return std::exp(pi) * std::pow(N + 0.5, ps + 1.0) / (-ps - 1.0);
}

ModeCoefficients coefficients(const FoldedProfile& profile, const AbelSolution& abel, int N,
                              const CoefficientOptions& opt) {
    if (N < 1) throw DomainError("mode count must be at least 1");
    const int size = 2 * N + 1;
    auto integrand = [&](double x) {
        Eigen::VectorXcd v(size);
        const double w = profile.h(x) * abel.phi_prime(x);
        const cplx z = std::polar(1.0, -kTwoPi * abel.phi(x));
        cplx p = w;
        v[N] = p;
        for (int n = 1; n <= N; ++n) {
            p *= z;
            v[N + n] = p;
            v[N - n] = std::conj(p);
        }
        return v;
    };
    ModeCoefficients c;
    c.N = N;
    double err = 0.0;
    c.A = split_integral(integrand, -1.0, 1.0, profile.breaks, opt.rel_tol, &err);
    c.quadrature_error = err;
    c.weighted_tail = estimate_weighted_tail(c.A, N);
    return c;
}

WaveField::WaveField(CharMaps maps, AbelSolution abel, ModeCoefficients coefficients)
    : maps_(std::move(maps)), abel_(std::move(abel)), coeffs_(std::move(coefficients)) {
    initial_norm_squared_ = 2.0 * energy(*this, 0.0);
}

FieldValue WaveField::evaluate_unchecked(double x, double t) const {
    const double pp = abel_.phi(t + x), pm = abel_.phi(t - x);
    const double dp = abel_.phi_prime(t + x), dm = abel_.phi_prime(t - x);
    const cplx zp = std::polar(1.0, kTwoPi * pp), zm = std::polar(1.0, kTwoPi * pm);
    const int N = coeffs_.N;
    const auto& A = coeffs_.A;
    cplx u = 0.0, sp = 0.0, sm = 0.0;
    cplx ep = 1.0, em = 1.0;
    for (int n = 1; n <= N; ++n) {
        ep *= zp;
        em *= zm;
        const cplx a = A[N + n], b = A[N - n];
        const cplx ep_c = std::conj(ep), em_c = std::conj(em);
        u += a * (ep - em) + b * (ep_c - em_c);
        sp += double(n) * (a * ep - b * ep_c);
        sm += double(n) * (a * em - b * em_c);
    }
    const cplx i2pi(0.0, kTwoPi);
    return {u, i2pi * (dp * sp + dm * sm), i2pi * (dp * sp - dm * sm)};
}

FieldValue WaveField::evaluate(double x, double t) const {
    if (!(t >= 0.0) || t > maps_.horizon()) {
        throw DomainError("time " + std::to_string(t) + " outside the field's horizon");
    }
    const double s = maps_.curve().s(t);
    if (!(x >= -1e-14) || x > s * (1.0 + 1e-12) + 1e-14) {
        throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(t) +
                          ") outside 0 <= x <= s(t)");
    }
    return evaluate_unchecked(x, t);
}

cplx WaveField::evaluate(double x, double t, FieldComponent what) const {
    const auto v = evaluate(x, t);
    switch (what) {
        case FieldComponent::U: return v.u;
        case FieldComponent::Ux: return v.u_x;
        case FieldComponent::Ut: return v.u_t;
    }
    return v.u;
}

WaveField make_field(const CharMaps& maps, const AbelSolution& abel, const InitialData& data, int N,
                     const CoefficientOptions& opt) {
    const auto profile = fold(data);
    return WaveField(maps, abel, coefficients(profile, abel, N, opt));
}

double energy(const WaveField& field, double t, double rel_tol) {
    if (!(t >= 0.0)) throw DomainError("energy needs t >= 0");
    const double s = field.curve().s(t);
    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.initial_panels = 8;
    const auto r = quad::integrate(
        [&](double x) {
            const auto v = field.evaluate_unchecked(x, t);
            return std::norm(v.u_x) + std::norm(v.u_t);
        },
        0.0, s, opt);
    return 0.5 * r.value;
}

double energy_rate(const WaveField& field, double t) {
    const auto& c = field.curve();
    const double sp = c.s_prime(t);
    const auto v = field.evaluate_unchecked(c.s(t), t);
    return 0.5 * sp * (sp * sp - 1.0) * std::norm(v.u_x);
}

Extrema function_extrema(const std::function<double(double)>& f, double lo, double hi, int samples) {
    samples = std::max(samples, 3);
    std::vector<double> xs(samples), ys(samples);
    for (int i = 0; i < samples; ++i) {
        xs[i] = lo + (hi - lo) * i / (samples - 1);
        ys[i] = f(xs[i]);
    }
    const auto imin = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());
    const auto imax = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    double m = ys[imin], M = ys[imax];
    if (imin > 0 && imin + 1 < samples) m = std::min(m, golden_min(f, xs[imin - 1], xs[imin + 1]));
    if (imax > 0 && imax + 1 < samples) {
        M = std::max(M, -golden_min([&](double x) { return -f(x); }, xs[imax - 1], xs[imax + 1]));
    }
    return {m, M};
}

Extrema phi_extrema(const AbelSolution& abel, const CharMaps& maps, double t) {
    return function_extrema(abel.phi_prime, maps.beta(t), maps.alpha(t));
}

Eigen::MatrixXcd exponential_gram(const AbelSolution& abel, double lo, double hi, int size,
                                  double rel_tol) {
    if (size < 1) throw DomainError("Gram matrix needs size >= 1");
    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.initial_panels = 16;
    const auto moments = quad::integrate(
        [&](double x) {
            Eigen::VectorXcd v(size);
            const cplx z = std::polar(1.0, kTwoPi * abel.phi(x));
            cplx p = abel.phi_prime(x);
            for (int k = 0; k < size; ++k) {
                v[k] = p;
                p *= z;
            }
            return v;
        },
        lo, hi, opt);
    Eigen::MatrixXcd G(size, size);
    for (int n = 0; n < size; ++n) {
        for (int m = 0; m < size; ++m) {
            G(n, m) = n >= m ? moments.value[n - m] : std::conj(moments.value[m - n]);
        }
    }
    return G;
}

}  // namespace abelwave
