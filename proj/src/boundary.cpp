#include "abelwave/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "abelwave/error.hpp"
#include "abelwave/roots.hpp"
#include "abelwave/spline.hpp"

namespace abelwave {

std::string to_string(Family family) {
    switch (family) {
        case Family::Linear: return "linear";
        case Family::Parabolic: return "parabolic";
        case Family::Hyperbolic: return "hyperbolic";
        case Family::Shrinking: return "shrinking";
        case Family::Custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name) {
    if (name == "linear") return Family::Linear;
    if (name == "parabolic") return Family::Parabolic;
    if (name == "hyperbolic") return Family::Hyperbolic;
    if (name == "shrinking") return Family::Shrinking;
    if (name == "custom") return Family::Custom;
    throw ConfigError("unknown boundary family '" + name + "'");
}

BoundaryCurve BoundaryCurve::make(Family family, double eps) {
    BoundaryCurve c;
    c.family_ = family;
    c.epsilon_ = eps;
    c.label_ = to_string(family);
    auto require = [&](bool ok, const char* range) {
        if (!ok || !std::isfinite(eps)) {
            throw DomainError(c.label_ + " boundary needs epsilon in " + range + ", got " +
                              std::to_string(eps));
        }
    };
    switch (family) {
        case Family::Linear:
            require(eps > 0.0 && eps < 1.0, "(0, 1)");
            c.s_ = [eps](double t) { return 1.0 + eps * t; };
            c.s_prime_ = [eps](double) { return eps; };
            c.s_second_ = [](double) { return 0.0; };
            break;
        case Family::Parabolic:
            require(eps > 0.0 && eps < 2.0, "(0, 2)");
            c.s_ = [eps](double t) { return std::sqrt(1.0 + eps * t); };
            c.s_prime_ = [eps](double t) { return eps / (2.0 * std::sqrt(1.0 + eps * t)); };
            c.s_second_ = [eps](double t) {
                const double r = std::sqrt(1.0 + eps * t);
                return -eps * eps / (4.0 * r * r * r);
            };
            break;
        case Family::Hyperbolic: {
            require(eps > 0.0, "(0, ∞)");
            // s̃(t) = (−1 + √(1 + (1 + εt)²))/ε has s̃(0) = (√2 − 1)/ε. Dividing x and
            // t by that value gives a curve with s(0) = 1 that no longer depends
            // on ε: s(t) = (−1 + √(1 + (1 + kt)²))/k with k = √2 − 1.
            const double k = std::numbers::sqrt2 - 1.0;
            c.time_scale_ = k / eps;
            c.s_ = [k](double t) {
                const double u = 1.0 + k * t;
                return (std::sqrt(1.0 + u * u) - 1.0) / k;
            };
            c.s_prime_ = [k](double t) {
                const double u = 1.0 + k * t;
                return u / std::sqrt(1.0 + u * u);
            };
            c.s_second_ = [k](double t) {
                const double u = 1.0 + k * t;
                const double r = std::sqrt(1.0 + u * u);
                return k / (r * r * r);
            };
            break;
        }
        case Family::Shrinking:
            require(eps > 0.0 && eps < 1.0, "(0, 1)");
            c.s_ = [eps](double t) { return 1.0 / (1.0 + eps * t); };
            c.s_prime_ = [eps](double t) {
                const double d = 1.0 + eps * t;
                return -eps / (d * d);
            };
            c.s_second_ = [eps](double t) {
                const double d = 1.0 + eps * t;
                return 2.0 * eps * eps / (d * d * d);
            };
            break;
        case Family::Custom:
            throw UnsupportedError("custom curves are built with BoundaryCurve::custom");
    }
    c.validate();
    return c;
}

BoundaryCurve BoundaryCurve::custom(Fn s, Fn s_prime, Fn s_second, double domain_limit,
                                    std::string label) {
    if (!s || !s_prime) throw ConfigError("custom curve needs s and s'");
    BoundaryCurve c;
    c.family_ = Family::Custom;
    c.label_ = std::move(label);
    c.s_ = std::move(s);
    c.s_prime_ = std::move(s_prime);
    c.s_second_ = std::move(s_second);
    c.domain_limit_ = domain_limit;
    c.validate();
    return c;
}

BoundaryCurve BoundaryCurve::from_samples(std::vector<double> t, std::vector<double> s) {
    if (t.empty() || std::abs(t.front()) > 1e-12) {
        throw ConfigError("boundary samples must start at t = 0");
    }
    const double limit = t.back();
    auto spline = std::make_shared<CubicSpline>(std::move(t), std::move(s));
    return custom([spline](double x) { return (*spline)(x); },
                  [spline](double x) { return spline->derivative(x); },
                  [spline](double x) { return spline->second_derivative(x); }, limit, "samples");
}

double BoundaryCurve::s_second(double t) const {
    if (!s_second_) throw UnsupportedError("boundary curve '" + label_ + "' has no s''");
    return s_second_(t);
}

void BoundaryCurve::validate() {
    if (std::abs(s_(0.0) - 1.0) > 1e-12) {
        throw DomainError("boundary must satisfy s(0) = 1, got " + std::to_string(s_(0.0)));
    }
    const double horizon = std::min(domain_limit_, 200.0);
    constexpr int kSamples = 20000;
    double sup = 0.0;
    bool increasing = true, decreasing = true;
    double prev = s_(0.0);
    for (int i = 0; i <= kSamples; ++i) {
        const double t = horizon * i / kSamples;
        const double st = s_(t);
        const double sp = s_prime_(t);
        if (!(st > 0.0)) throw DomainError("boundary must stay positive; s(" + std::to_string(t) + ") <= 0");
        if (!std::isfinite(sp)) throw DomainError("non-finite s' at t = " + std::to_string(t));
        sup = std::max(sup, std::abs(sp));
        if (i > 0) {
            if (!(st > prev)) increasing = false;
            if (!(st < prev)) decreasing = false;
        }
        prev = st;
    }
    if (!(sup < 1.0)) {
        throw DomainError("boundary must satisfy ||s'||_inf < 1, sampled sup is " + std::to_string(sup));
    }
    sup_s_prime_ = sup;
    monotonicity_ = increasing ? 1 : (decreasing ? -1 : 0);
}

CharMaps::CharMaps(BoundaryCurve curve, double horizon)
    : curve_(std::move(curve)), horizon_(std::min(horizon, curve_.domain_limit())) {
    if (!(horizon_ > 0.0)) throw DomainError("characteristic maps need a positive horizon");
    if (std::isfinite(horizon_)) {
        beta_limit_ = horizon_ - curve_.s(horizon_);
    } else if (curve_.family() == Family::Hyperbolic) {
        beta_limit_ = 0.0;
    } else if (curve_.sup_s_prime() < 1.0 - 1e-6) {
        beta_limit_ = std::numeric_limits<double>::infinity();
    } else {
        beta_limit_ = 1e12 - curve_.s(1e12);
    }
}

void CharMaps::check_time(double t) const {
    if (!(t >= 0.0) || t > horizon_) {
        throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(horizon_) + "]");
    }
}

double CharMaps::alpha(double t) const {
    check_time(t);
    return t + curve_.s(t);
}

double CharMaps::beta(double t) const {
    check_time(t);
    return t - curve_.s(t);
}

double CharMaps::bracket_upper(double target, bool for_beta) const {
    const double sigma = curve_.sup_s_prime();
    const double start = for_beta ? -1.0 : 1.0;
    double hi = 1.0;
    if (sigma < 1.0 - 1e-9) hi = std::max(hi, 1.01 * (target - start) / (1.0 - sigma));
    hi = std::min(hi, horizon_);
    auto F = [&](double t) { return for_beta ? t - curve_.s(t) : t + curve_.s(t); };
    for (int i = 0; i < 2100 && F(hi) < target; ++i) {
        if (hi >= horizon_) {
            throw DomainError(std::string(for_beta ? "beta" : "alpha") + " never reaches " +
                              std::to_string(target) + " before the horizon");
        }
        hi = std::min(2.0 * hi, horizon_);
    }
    return hi;
}

double CharMaps::beta_inv(double y) const {
    if (y < -1.0 - 1e-12) throw DomainError("beta_inv needs y >= -1, got " + std::to_string(y));
    if (y <= -1.0) return 0.0;
    if (!(y < beta_limit_)) {
        throw DomainError("beta_inv(" + std::to_string(y) + ") undefined: beta stays below " +
                          std::to_string(beta_limit_));
    }
    const double hi = bracket_upper(y, true);
    return solve_increasing([this](double t) { return t - curve_.s(t); },
                            [this](double t) { return 1.0 - curve_.s_prime(t); }, y, 0.0, hi);
}

double CharMaps::alpha_inv(double z) const {
    if (z < 1.0 - 1e-12) throw DomainError("alpha_inv needs z >= 1, got " + std::to_string(z));
    if (z <= 1.0) return 0.0;
    const double hi = bracket_upper(z, false);
    return solve_increasing([this](double t) { return t + curve_.s(t); },
                            [this](double t) { return 1.0 + curve_.s_prime(t); }, z, 0.0, hi);
}

CharMaps::Step CharMaps::step(double y) const {
    const double t = beta_inv(y);
    const double sp = curve_.s_prime(t);
    return {t, t + curve_.s(t), (1.0 + sp) / (1.0 - sp)};
}

double CharMaps::gamma(double y) const { return step(y).value; }

double CharMaps::gamma_prime(double y) const { return step(y).derivative; }

double CharMaps::gamma_second(double y) const {
    const double t = beta_inv(y);
    const double d = 1.0 - curve_.s_prime(t);
    return 2.0 * curve_.s_second(t) / (d * d * d);
}

double CharMaps::gamma_inv(double z) const { return beta(alpha_inv(z)); }

OptimalTimes optimal_times(const CharMaps& maps) {
    const double inf = std::numeric_limits<double>::infinity();
    OptimalTimes out{inf, inf, std::numeric_limits<double>::quiet_NaN(), inf, {}};
    try {
        out.t0 = maps.beta_inv(0.0);
        out.left = maps.alpha(out.t0);
    } catch (const DomainError&) {
    }
    try {
        out.right = maps.beta_inv(1.0);
    } catch (const DomainError&) {
    }
    out.interior = [&maps](double a) { return interior_time(maps, a); };
    return out;
}

double interior_time(const CharMaps& maps, double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("interior point must lie in (0, 1)");
    return a + maps.gamma(-a);
}

double default_horizon(const CharMaps& maps) {
    const auto times = optimal_times(maps);
    const double h = std::isfinite(times.left) ? 10.0 * times.left : 10.0;
    return std::min(h, maps.horizon());
}

}  // namespace abelwave
