#pragma once

// Laplace exponent Psi(gamma) = log E[e^{-gamma X_1}] on [0, gamma_c):
//
//   Psi(gamma) = -delta gamma + sigma^2 gamma^2 / 2 + int (e^{-gamma x} - 1 + gamma x) Pi(dx)
//
// The jump integral is split at -1, 0, +1. On [-1, 1] the integrand behaves
// like gamma^2 x^2 / 2 and is evaluated with a series guard; the tails are
// integrated after substituting out their exponential decay.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyruin/levy_model.hpp"
#include "levyruin/quadrature.hpp"

namespace levyruin {

enum class EvalMode {
    closed_form,  ///< closed form for exponential families, quadrature for the rest
    quadrature,   ///< quadrature for every component
    both,         ///< closed form, cross-checked against quadrature on every call
};

enum class LimitStatus { finite, diverges, inconclusive };

struct PsiLimit {
    LimitStatus status = LimitStatus::inconclusive;
    double value = std::numeric_limits<double>::quiet_NaN();
    int refinements = 0;
};

struct PsiSample {
    double gamma = 0.0;
    double psi = 0.0;
    double psi_prime = 0.0;
};

inline const char* to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::finite: return "finite";
        case LimitStatus::diverges: return "diverges";
        case LimitStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace detail {

// int (e^{-gamma x} - 1 + gamma x) Pi(dx) for one component, closed form.
inline double compensated_closed_form(const ExponentialNegative& e, double g) {
    return e.beta * g * g / (e.alpha * (e.alpha - g));
}
inline double compensated_closed_form(const ExponentialPositive& e, double g) {
    return e.beta * g * g / (e.alpha * (e.alpha + g));
}
inline double compensated_derivative_closed_form(const ExponentialNegative& e, double g) {
    const double k = e.alpha - g;
    return e.beta * g * (2.0 * e.alpha - g) / (e.alpha * k * k);
}
inline double compensated_derivative_closed_form(const ExponentialPositive& e, double g) {
    const double k = e.alpha + g;
    return e.beta * g * (2.0 * e.alpha + g) / (e.alpha * k * k);
}

// Density beta * alpha * e^{-alpha y} on y >= 0 against h(y, log_w, log_net),
// where log_w is the log density and log_net = log_w +/- gamma y is formed
// directly from the net decay rate. The integrand mixes a slowly and a
// quickly decaying exponential, so [1, inf) is cut where the fast one has
// died out (e^{-40}): before the cut y is integrated directly, after it the
// slow decay is substituted out with y = y_cut + s / slow.
template <class H>
double exponential_family_integral(double beta, double alpha, double net, double fast, H h) {
    const double log_ba = std::log(beta * alpha);
    const double slow = std::min(net, alpha);
    const auto at = [&](double y) { return h(y, log_ba - alpha * y, log_ba - net * y); };
    const double y_cut = 1.0 + 40.0 / fast;
    const auto tail = [&](double s) { return at(y_cut + s / slow) / slow; };
    return quad::integrate(at, 0.0, 1.0).value + quad::integrate(at, 1.0, y_cut).value +
           quad::integrate(tail, 0.0, quad::infinity).value;
}

// scale * e^{-alpha y} y^{-power} on y >= cutoff, integrated in
// v = log(y / cutoff), cut where e^{-alpha y} has died out relative to the
// net decay e^{-(alpha - gamma) y}.
template <class H>
double tempered_integral(const TemperedParetoNegative& tp, double gamma, H h) {
    const double log_c = std::log(tp.scale);
    const double decay = tp.alpha - gamma;
    const auto f = [&](double v) {
        if (v > 700.0) return 0.0;
        const double y = tp.cutoff * std::exp(v);
        const double lp = log_c + (1.0 - tp.power) * std::log(y);  // includes dy = y dv
        return h(y, lp - tp.alpha * y, lp - decay * y);
    };
    const double v_cut = std::log1p(40.0 / (tp.alpha * tp.cutoff));
    const auto tail = [&](double s) { return f(v_cut + s); };
    return quad::integrate(f, 0.0, v_cut).value + quad::integrate(tail, 0.0, quad::infinity).value;
}

inline double compensated_quadrature(const JumpComponent& c, double g) {
    return std::visit(
        overloaded{
            [&](const ExponentialNegative& e) {
                // x = -y: e^{gamma y} - 1 - gamma y
                return exponential_family_integral(e.beta, e.alpha, e.alpha - g, e.alpha, [&](double y, double lw, double ln) {
                    return quad::expm1_minus_linear_weighted(g * y, lw, ln);
                });
            },
            [&](const ExponentialPositive& e) {
                return exponential_family_integral(e.beta, e.alpha, e.alpha, e.alpha + g, [&](double x, double lw, double) {
                    return quad::expm1_minus_linear(-g * x) * std::exp(lw);
                });
            },
            [&](const TemperedParetoNegative& tp) {
                return tempered_integral(tp, g, [&](double y, double lw, double ln) {
                    return quad::expm1_minus_linear_weighted(g * y, lw, ln);
                });
            },
        },
        c);
}

// int x (1 - e^{-gamma x}) Pi(dx)
inline double compensated_derivative_quadrature(const JumpComponent& c, double g) {
    return std::visit(
        overloaded{
            [&](const ExponentialNegative& e) {
                return exponential_family_integral(e.beta, e.alpha, e.alpha - g, e.alpha, [&](double y, double lw, double ln) {
                    return y * quad::expm1_weighted(g * y, lw, ln);
                });
            },
            [&](const ExponentialPositive& e) {
                return exponential_family_integral(e.beta, e.alpha, e.alpha, e.alpha + g, [&](double x, double lw, double) {
                    return -x * std::expm1(-g * x) * std::exp(lw);
                });
            },
            [&](const TemperedParetoNegative& tp) {
                return tempered_integral(tp, g, [&](double y, double lw, double ln) {
                    return y * quad::expm1_weighted(g * y, lw, ln);
                });
            },
        },
        c);
}

inline double compensated(const JumpComponent& c, double g, bool use_quadrature) {
    if (!use_quadrature) {
        if (const auto* e = std::get_if<ExponentialNegative>(&c)) return compensated_closed_form(*e, g);
        if (const auto* e = std::get_if<ExponentialPositive>(&c)) return compensated_closed_form(*e, g);
    }
    return compensated_quadrature(c, g);
}

inline double compensated_derivative(const JumpComponent& c, double g, bool use_quadrature) {
    if (!use_quadrature) {
        if (const auto* e = std::get_if<ExponentialNegative>(&c)) return compensated_derivative_closed_form(*e, g);
        if (const auto* e = std::get_if<ExponentialPositive>(&c)) return compensated_derivative_closed_form(*e, g);
    }
    return compensated_derivative_quadrature(c, g);
}

}  // namespace detail

/// Evaluator of Psi and Psi' for a validated triplet. Immutable after
/// construction and safe to share between threads.
class LaplaceExponent {
public:
    /// Relative disagreement tolerated between the two routes in EvalMode::both.
    static constexpr double mode_agreement_tol = 1e-8;

    explicit LaplaceExponent(LevyTriplet triplet, EvalMode mode = EvalMode::closed_form)
        : triplet_(std::move(triplet)), mode_(mode) {
        require_valid(triplet_);
        gamma_c_ = levyruin::gamma_c(triplet_.jumps);
        delta_ = levyruin::delta(triplet_);
    }

    const LevyTriplet& triplet() const { return triplet_; }
    EvalMode mode() const { return mode_; }
    double gamma_c() const { return gamma_c_; }
    double delta() const { return delta_; }

    /// Psi(gamma) for gamma in [0, gamma_c). Psi(0) is exactly 0.
    double psi(double gamma) const {
        check_domain(gamma, "psi");
        if (gamma == 0.0) return 0.0;
        return evaluate(gamma, false);
    }

    /// Psi'(gamma) for gamma in [0, gamma_c); at 0 this is the right
    /// derivative -delta.
    double psi_prime(double gamma) const {
        check_domain(gamma, "psi_prime");
        if (gamma == 0.0) return -delta_;
        return evaluate(gamma, true);
    }

    /// Jump integral int (e^{-gamma x} - 1 + gamma x) Pi(dx) through one route.
    double jump_part(double gamma, bool use_quadrature) const {
        double s = 0.0;
        for (const auto& c : triplet_.jumps.components()) s += detail::compensated(c, gamma, use_quadrature);
        return s;
    }

    double jump_part_derivative(double gamma, bool use_quadrature) const {
        double s = 0.0;
        for (const auto& c : triplet_.jumps.components()) s += detail::compensated_derivative(c, gamma, use_quadrature);
        return s;
    }

    /// lim Psi(gamma) as gamma -> gamma_c-, by refining gamma_k = gamma_c (1 - 2^-k).
    ///
    /// Diverges once Psi exceeds 1e12 with three increasing increments, or
    /// when the last eight increments each grow by at least 1.5x (geometric
    /// blow-up that would pass 1e12 only beyond double resolution). Finite
    /// when an increment drops below 1e-10 max(1, |Psi|) while shrinking; the
    /// geometric remainder of the increments is added to the last value.
    PsiLimit limit_at_gamma_c() const {
        if (!std::isfinite(gamma_c_)) throw std::logic_error("limit_at_gamma_c: gamma_c is infinite");
        constexpr int k_max = 60;
        constexpr double divergence_threshold = 1e12;
        constexpr double convergence_tol = 1e-10;

        std::vector<double> values;
        std::vector<double> increments;
        PsiLimit out;
        for (int k = 1; k <= k_max; ++k) {
            const double g = gamma_c_ * (1.0 - std::ldexp(1.0, -k));
            if (!(g < gamma_c_)) break;
            const double v = psi(g);
            out.refinements = k;
            if (!values.empty()) increments.push_back(v - values.back());
            values.push_back(v);

            if (!std::isfinite(v) && v > 0) {
                out.status = LimitStatus::diverges;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            const std::size_t m = increments.size();
            if (m >= 3) {
                const double i0 = increments[m - 3], i1 = increments[m - 2], i2 = increments[m - 1];
                if (v > divergence_threshold && i0 > 0.0 && i1 > i0 && i2 > i1) {
                    out.status = LimitStatus::diverges;
                    out.value = std::numeric_limits<double>::infinity();
                    return out;
                }
            }
            if (m >= 9) {
                bool geometric = true;
                for (std::size_t j = m - 8; j < m; ++j) {
                    if (!(increments[j - 1] > 0.0 && increments[j] >= 1.5 * increments[j - 1])) {
                        geometric = false;
                        break;
                    }
                }
                if (geometric) {
                    out.status = LimitStatus::diverges;
                    out.value = std::numeric_limits<double>::infinity();
                    return out;
                }
            }
            if (m >= 2) {
                const double inc = increments[m - 1];
                const double prev = increments[m - 2];
                if (std::fabs(inc) <= convergence_tol * std::max(1.0, std::fabs(v)) &&
                    std::fabs(inc) <= std::fabs(prev)) {
                    const double r = prev != 0.0 ? inc / prev : 0.0;
                    out.status = LimitStatus::finite;
                    out.value = (r >= 0.0 && r < 1.0) ? v + inc * r / (1.0 - r) : v;
                    return out;
                }
            }
        }
        out.status = LimitStatus::inconclusive;
        out.value = values.empty() ? std::numeric_limits<double>::quiet_NaN() : values.back();
        return out;
    }

    /// n samples of (gamma, Psi, Psi') starting at gamma = 0. With finite
    /// gamma_c the grid is gamma_c (1 - (1 - i / n)^3), ending just below
    /// gamma_c; otherwise uniform on [0, gamma_max].
    std::vector<PsiSample> curve(std::size_t n, double gamma_max = 1.0) const {
        if (n < 2) throw std::invalid_argument("psi_curve: n must be >= 2");
        std::vector<PsiSample> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double g = 0.0;
            if (std::isfinite(gamma_c_)) {
                const double rest = 1.0 - static_cast<double>(i) / static_cast<double>(n);
                g = gamma_c_ * (1.0 - rest * rest * rest);
            } else {
                if (!(gamma_max > 0.0 && std::isfinite(gamma_max)))
                    throw std::invalid_argument("psi_curve: gamma_max must be positive and finite");
                g = gamma_max * static_cast<double>(i) / static_cast<double>(n - 1);
            }
            rows.push_back({g, psi(g), psi_prime(g)});
        }
        return rows;
    }

private:
    void check_domain(double gamma, const char* who) const {
        if (!(gamma >= 0.0)) throw std::domain_error(std::string(who) + ": gamma must be >= 0");
        if (!(gamma < gamma_c_)) throw std::domain_error(std::string(who) + ": gamma must be < gamma_c");
    }

    double assemble(double gamma, bool derivative, bool use_quadrature) const {
        if (derivative)
            return -delta_ + triplet_.sigma2 * gamma + jump_part_derivative(gamma, use_quadrature);
        return -delta_ * gamma + 0.5 * triplet_.sigma2 * gamma * gamma + jump_part(gamma, use_quadrature);
    }

    double evaluate(double gamma, bool derivative) const {
        switch (mode_) {
            case EvalMode::closed_form: return assemble(gamma, derivative, false);
            case EvalMode::quadrature: return assemble(gamma, derivative, true);
            case EvalMode::both: {
                const double a = assemble(gamma, derivative, false);
                const double b = assemble(gamma, derivative, true);
                const double scale = std::max({std::fabs(a), std::fabs(delta_ * gamma),
                                               std::fabs(jump_part(gamma, false)), 1e-300});
                if (std::fabs(a - b) > mode_agreement_tol * scale)
                    throw std::runtime_error("closed-form and quadrature Laplace exponent disagree at gamma=" +
                                             format_double(gamma));
                return a;
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    LevyTriplet triplet_;
    EvalMode mode_;
    double gamma_c_ = 0.0;
    double delta_ = 0.0;
};

}  // namespace levyruin
