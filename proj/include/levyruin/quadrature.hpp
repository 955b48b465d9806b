#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levyruin::quad {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk_panel(const F& f, double a, double b) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

template <class F>
Result integrate_finite(const F& f, double a, double b, double rel_tol, int max_panels, double abs_tol) {
    std::priority_queue<Panel> panels;
    auto first = gk_panel(f, a, b);
    double total = first.value;
    double total_err = first.error;
    panels.push(first);
    int count = 1;
    while (count < max_panels && total_err > std::max(rel_tol * std::fabs(total), abs_tol)) {
        const auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            panels.push(worst);
            break;
        }
        const auto left = gk_panel(f, worst.a, mid);
        const auto right = gk_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    // Re-sum to shed the drift of the running updates.
    Result r;
    r.intervals = count;
    while (!panels.empty()) {
        r.value += panels.top().value;
        r.error += panels.top().error;
        panels.pop();
    }
    return r;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (31-point panels) over [a, b], b may be
/// +inf. The panel with the largest error estimate is bisected until the
/// summed error is below rel_tol * |value| (or abs_tol), or the panel
/// budget is spent. Always terminates; callers read `error` when they care.
template <class F>
Result integrate(const F& f, double a, double b, double rel_tol = 1e-13, int max_panels = 400,
                 double abs_tol = 1e-300) {
    if (std::isinf(b)) {
        // x = a + t / (1 - t); GK nodes never touch t = 1.
        const auto g = [&f, a](double t) {
            const double one_minus = 1.0 - t;
            const double v = f(a + t / one_minus);
            return v / (one_minus * one_minus);
        };
        return detail::integrate_finite(g, 0.0, 1.0, rel_tol, max_panels, abs_tol);
    }
    return detail::integrate_finite(f, a, b, rel_tol, max_panels, abs_tol);
}

/// e^z - 1 - z without cancellation near zero.
inline double expm1_minus_linear(double z) {
    if (std::fabs(z) < 1e-4) {
        const double z2 = z * z;
        return z2 * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    return std::expm1(z) - z;
}

/// (e^z - 1 - z) e^{log_w}, where log_net = z + log_w is supplied by the
/// caller (computed without cancellation). Finite when e^z would overflow.
inline double expm1_minus_linear_weighted(double z, double log_w, double log_net) {
    if (z < 1.0) return expm1_minus_linear(z) * std::exp(log_w);
    return std::exp(log_net) - (1.0 + z) * std::exp(log_w);
}

/// (e^z - 1) e^{log_w}, with log_net = z + log_w as above.
inline double expm1_weighted(double z, double log_w, double log_net) {
    if (z < 1.0) return std::expm1(z) * std::exp(log_w);
    return std::exp(log_net) - std::exp(log_w);
}

}  // namespace levyruin::quad
