#pragma once

// Reference computations that share no code with the library: special
// functions, textbook formulas, plain bisection and a different quadrature
// family (double-exponential rules).

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace oracle {

inline double expint_n(int n, double z) { return boost::math::expint(n, z); }

/// Jump part of Psi for exponential claims, from the density by tanh-sinh/exp-sinh.
inline double exp_neg_jump_integral(double beta, double alpha, double gamma) {
    const auto f = [&](double y) {
        return beta * alpha * (std::exp((gamma - alpha) * y) - (1.0 + gamma * y) * std::exp(-alpha * y));
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

/// int_1^inf (e^{gamma y} - 1 - gamma y) c y^{-3} e^{-alpha y} dy in closed form.
inline double tempered_rho3_jump_integral(double c, double alpha, double gamma) {
    return c * (expint_n(3, alpha - gamma) - expint_n(3, alpha) - gamma * expint_n(2, alpha));
}

/// Derivative of the above in gamma.
inline double tempered_rho3_jump_derivative(double c, double alpha, double gamma) {
    return c * (expint_n(2, alpha - gamma) - expint_n(2, alpha));
}

/// int_{-inf}^{-1} e^{-gamma x} beta alpha e^{alpha x} dx by exp-sinh.
inline double exp_neg_tail_moment(double beta, double alpha, double gamma) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(
        [&](double s) { return beta * alpha * std::exp((gamma - alpha) * (1.0 + s)); }, 0.0,
        std::numeric_limits<double>::infinity());
}

/// Plain bisection of a continuous f with f(lo) < 0 < f(hi).
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Textbook quadratic formula, smaller root of a x^2 + b x + c.
inline double smaller_root(long double a, long double b, long double c) {
    return static_cast<double>((-b - std::sqrt(b * b - 4.0L * a * c)) / (2.0L * a));
}

/// Central finite difference.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Ultimate ruin probability of the classical model with exponential claims:
/// (beta / (p alpha)) e^{-(alpha - beta / p) u}.
inline double cramer_lundberg_ruin(double p, double beta, double alpha, double u) {
    return beta / (p * alpha) * std::exp(-(alpha - beta / p) * u);
}

/// Brownian bridge from a to b over time h with variance rate s2:
/// P(min <= m) = exp(-2 (a - m)(b - m) / (s2 h)) for m <= min(a, b).
inline double bridge_min_cdf(double a, double b, double s2, double h, double m) {
    if (m >= std::min(a, b)) return 1.0;
    return std::exp(-2.0 * (a - m) * (b - m) / (s2 * h));
}

/// Seeded generator helpers for property tests.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
