#pragma once

// Integrable Levy triplets (premium, sigma^2, Pi) with parametric jump measures.
//
// Jump sizes are signed: a claim of size y > 0 is a jump of -y. Each jump
// family is a finite measure, so the jump part is compound Poisson and the
// process can be written X_t = premium * t + sigma W_t + sum of jumps.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "levyruin/format.hpp"
#include "levyruin/quadrature.hpp"

namespace levyruin {

/// Pi(dx) = beta * alpha * e^{alpha x} dx on x <= 0: claims arrive at rate
/// beta with Exp(alpha) sizes.
struct ExponentialNegative {
    double beta = 0.0;
    double alpha = 0.0;

    friend bool operator==(const ExponentialNegative&, const ExponentialNegative&) = default;
};

/// Pi(dx) = beta * alpha * e^{-alpha x} dx on x >= 0.
struct ExponentialPositive {
    double beta = 0.0;
    double alpha = 0.0;

    friend bool operator==(const ExponentialPositive&, const ExponentialPositive&) = default;
};

/// Pi(dx) = scale * e^{alpha x} |x|^{-power} dx on x <= -cutoff.
///
/// With power >= 2 the exponential tail moment still converges at
/// gamma = alpha, so the Laplace exponent stays bounded up to gamma_c.
struct TemperedParetoNegative {
    double scale = 0.0;
    double alpha = 0.0;
    double power = 0.0;
    double cutoff = 0.0;

    friend bool operator==(const TemperedParetoNegative&, const TemperedParetoNegative&) = default;
};

using JumpComponent = std::variant<ExponentialNegative, ExponentialPositive, TemperedParetoNegative>;

/// Superposition of independent jump components. Empty means no jumps.
class JumpMeasure {
public:
    JumpMeasure() = default;
    JumpMeasure(std::initializer_list<JumpComponent> components) : components_(components) {}
    explicit JumpMeasure(std::vector<JumpComponent> components) : components_(std::move(components)) {}

    static JumpMeasure none() { return {}; }

    bool empty() const { return components_.empty(); }
    std::span<const JumpComponent> components() const { return components_; }

    bool has_negative_jumps() const {
        return std::any_of(components_.begin(), components_.end(), [](const JumpComponent& c) {
            return !std::holds_alternative<ExponentialPositive>(c);
        });
    }

    friend JumpMeasure operator+(JumpMeasure lhs, const JumpMeasure& rhs) {
        lhs.components_.insert(lhs.components_.end(), rhs.components_.begin(), rhs.components_.end());
        return lhs;
    }

    friend bool operator==(const JumpMeasure&, const JumpMeasure&) = default;

private:
    std::vector<JumpComponent> components_;
};

/// Result of an integral that may diverge analytically. Divergence is a tag,
/// never an overflowed double.
struct TailIntegral {
    double value = 0.0;
    bool divergent = false;

    static TailIntegral finite(double v) { return {v, false}; }
    static TailIntegral diverges() { return {std::numeric_limits<double>::infinity(), true}; }
};

struct LevyTriplet {
    double premium = 0.0;
    double sigma2 = 0.0;
    JumpMeasure jumps;

    friend bool operator==(const LevyTriplet&, const LevyTriplet&) = default;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

/// scale * int_{cutoff}^inf y^{k - power} e^{-alpha y} dy, integrated in
/// v = log(y / cutoff) so the integrand decays super-exponentially.
inline double tempered_moment(const TemperedParetoNegative& tp, double k) {
    const auto f = [&](double v) {
        if (v > 700.0) return 0.0;
        const double y = tp.cutoff * std::exp(v);
        return std::exp((k - tp.power + 1.0) * std::log(y) - tp.alpha * y);
    };
    return tp.scale * quad::integrate(f, 0.0, quad::infinity).value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-component quantities
// ---------------------------------------------------------------------------

/// Total jump intensity Pi(R).
inline double jump_rate(const JumpComponent& c) {
    return std::visit(detail::overloaded{
                          [](const ExponentialNegative& e) { return e.beta; },
                          [](const ExponentialPositive& e) { return e.beta; },
                          [](const TemperedParetoNegative& tp) { return detail::tempered_moment(tp, 0.0); },
                      },
                      c);
}

/// int x Pi(dx): drift contributed per unit time by the jumps.
inline double mean_jump_rate(const JumpComponent& c) {
    return std::visit(detail::overloaded{
                          [](const ExponentialNegative& e) { return -e.beta / e.alpha; },
                          [](const ExponentialPositive& e) { return e.beta / e.alpha; },
                          [](const TemperedParetoNegative& tp) { return -detail::tempered_moment(tp, 1.0); },
                      },
                      c);
}

inline double critical_exponent(const JumpComponent& c) {
    return std::visit(detail::overloaded{
                          [](const ExponentialNegative& e) { return e.alpha; },
                          [](const ExponentialPositive&) { return std::numeric_limits<double>::infinity(); },
                          [](const TemperedParetoNegative& tp) { return tp.alpha; },
                      },
                      c);
}

/// int_{-inf}^{-1} e^{-gamma x} Pi(dx).
inline TailIntegral negative_tail_moment(const JumpComponent& c, double gamma) {
    return std::visit(
        detail::overloaded{
            [&](const ExponentialNegative& e) {
                if (gamma >= e.alpha) return TailIntegral::diverges();
                const double k = e.alpha - gamma;
                return TailIntegral::finite(e.beta * e.alpha * std::exp(-k) / k);
            },
            [](const ExponentialPositive&) { return TailIntegral::finite(0.0); },
            [&](const TemperedParetoNegative& tp) {
                if (gamma > tp.alpha) return TailIntegral::diverges();
                const double k = tp.alpha - gamma;
                if (k == 0.0) {
                    return TailIntegral::finite(tp.scale * std::pow(tp.cutoff, 1.0 - tp.power) / (tp.power - 1.0));
                }
                const auto f = [&](double v) {
                    if (v > 700.0) return 0.0;
                    const double y = tp.cutoff * std::exp(v);
                    return std::exp((1.0 - tp.power) * std::log(y) - k * y);
                };
                return TailIntegral::finite(tp.scale * quad::integrate(f, 0.0, quad::infinity).value);
            },
        },
        c);
}

/// int (x^2 ^ 1) Pi(dx).
inline double truncated_second_moment(const JumpComponent& c) {
    const auto exponential = [](double beta, double alpha) {
        const auto f = [&](double y) { return y * y * alpha * std::exp(-alpha * y); };
        return beta * (quad::integrate(f, 0.0, 1.0).value + std::exp(-alpha));
    };
    return std::visit(detail::overloaded{
                          [&](const ExponentialNegative& e) { return exponential(e.beta, e.alpha); },
                          [&](const ExponentialPositive& e) { return exponential(e.beta, e.alpha); },
                          [](const TemperedParetoNegative& tp) { return detail::tempered_moment(tp, 0.0); },
                      },
                      c);
}

/// int_{|x| >= 1} |x| Pi(dx).
inline double large_jump_first_moment(const JumpComponent& c) {
    const auto exponential = [](double beta, double alpha) {
        return beta * std::exp(-alpha) * (1.0 + 1.0 / alpha);
    };
    return std::visit(detail::overloaded{
                          [&](const ExponentialNegative& e) { return exponential(e.beta, e.alpha); },
                          [&](const ExponentialPositive& e) { return exponential(e.beta, e.alpha); },
                          [](const TemperedParetoNegative& tp) { return detail::tempered_moment(tp, 1.0); },
                      },
                      c);
}

/// Empty string when the parameters are admissible, otherwise the reason.
inline std::string parameter_problem(const JumpComponent& c) {
    using detail::positive_finite;
    return std::visit(
        detail::overloaded{
            [](const ExponentialNegative& e) -> std::string {
                if (!positive_finite(e.beta)) return "exponential_negative: beta must be > 0";
                if (!positive_finite(e.alpha)) return "exponential_negative: alpha must be > 0";
                return {};
            },
            [](const ExponentialPositive& e) -> std::string {
                if (!positive_finite(e.beta)) return "exponential_positive: beta must be > 0";
                if (!positive_finite(e.alpha)) return "exponential_positive: alpha must be > 0";
                return {};
            },
            [](const TemperedParetoNegative& tp) -> std::string {
                if (!positive_finite(tp.scale)) return "tempered_pareto_negative: scale must be > 0";
                if (!positive_finite(tp.alpha)) return "tempered_pareto_negative: alpha must be > 0";
                if (!(std::isfinite(tp.power) && tp.power >= 2.0))
                    return "tempered_pareto_negative: power must be >= 2";
                if (!(std::isfinite(tp.cutoff) && tp.cutoff >= 1.0))
                    return "tempered_pareto_negative: cutoff must be >= 1";
                return {};
            },
        },
        c);
}

inline std::string describe(const JumpComponent& c) {
    return std::visit(detail::overloaded{
                          [](const ExponentialNegative& e) {
                              return "exponential_negative(beta=" + format_double(e.beta) +
                                     ", alpha=" + format_double(e.alpha) + ")";
                          },
                          [](const ExponentialPositive& e) {
                              return "exponential_positive(beta=" + format_double(e.beta) +
                                     ", alpha=" + format_double(e.alpha) + ")";
                          },
                          [](const TemperedParetoNegative& tp) {
                              return "tempered_pareto_negative(scale=" + format_double(tp.scale) +
                                     ", alpha=" + format_double(tp.alpha) +
                                     ", power=" + format_double(tp.power) +
                                     ", cutoff=" + format_double(tp.cutoff) + ")";
                          },
                      },
                      c);
}

// ---------------------------------------------------------------------------
// Measure-level operations
// ---------------------------------------------------------------------------

/// sup{gamma >= 0 : int_{-inf}^{-1} e^{-gamma x} Pi(dx) < inf}. The minimum
/// over components; +inf without negative jumps.
inline double gamma_c(const JumpMeasure& jumps) {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& c : jumps.components()) g = std::min(g, critical_exponent(c));
    return g;
}

/// int_{-inf}^{-1} e^{-gamma x} Pi(dx), tagged divergent past gamma_c.
inline TailIntegral mean_tail_moment(const JumpMeasure& jumps, double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("mean_tail_moment: gamma must be >= 0");
    double total = 0.0;
    for (const auto& c : jumps.components()) {
        const auto t = negative_tail_moment(c, gamma);
        if (t.divergent) return TailIntegral::diverges();
        total += t.value;
    }
    return TailIntegral::finite(total);
}

inline std::string describe(const JumpMeasure& jumps) {
    if (jumps.empty()) return "none";
    std::string out;
    for (const auto& c : jumps.components()) {
        if (!out.empty()) out += " + ";
        out += describe(c);
    }
    return out;
}

inline std::string describe(const LevyTriplet& t) {
    return "premium=" + format_double(t.premium) + " sigma2=" + format_double(t.sigma2) +
           " jumps=" + describe(t.jumps);
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }

    std::string failures() const {
        std::string out;
        for (const auto& c : checks) {
            if (c.passed) continue;
            if (!out.empty()) out += "; ";
            out += c.name + ": " + c.detail;
        }
        return out;
    }
};

/// Checks parameters, integrability of the jump measure, light-tailed negative
/// jumps and non-degeneracy. Never throws.
inline ValidationReport validate(const LevyTriplet& t) {
    ValidationReport report;

    std::string problems;
    if (!std::isfinite(t.premium)) problems = "premium must be finite";
    if (!(std::isfinite(t.sigma2) && t.sigma2 >= 0.0)) {
        if (!problems.empty()) problems += "; ";
        problems += "sigma2 must be finite and >= 0";
    }
    for (const auto& c : t.jumps.components()) {
        auto p = parameter_problem(c);
        if (p.empty()) continue;
        if (!problems.empty()) problems += "; ";
        problems += p;
    }
    const bool params_ok = problems.empty();
    report.checks.push_back({"parameters", params_ok, params_ok ? "admissible" : problems});

    if (!params_ok) {
        for (const char* name : {"levy_measure", "integrable", "light_tailed_negative_jumps"})
            report.checks.push_back({name, false, "skipped: invalid parameters"});
    } else {
        double second = 0.0, first = 0.0;
        for (const auto& c : t.jumps.components()) {
            second += truncated_second_moment(c);
            first += large_jump_first_moment(c);
        }
        report.checks.push_back({"levy_measure", std::isfinite(second),
                                 "int (x^2 ^ 1) Pi(dx) = " + format_double(second)});
        report.checks.push_back({"integrable", std::isfinite(first),
                                 "int_{|x|>=1} |x| Pi(dx) = " + format_double(first)});
        const double gc = gamma_c(t.jumps);
        report.checks.push_back({"light_tailed_negative_jumps", gc > 0.0, "gamma_c = " + format_double(gc)});
    }

    const bool nonzero = t.premium != 0.0 || t.sigma2 > 0.0 || !t.jumps.empty();
    report.checks.push_back({"non_degenerate", nonzero, nonzero ? "non-zero process" : "X is identically zero"});
    return report;
}

/// Throws std::invalid_argument listing every failed check.
inline void require_valid(const LevyTriplet& t) {
    const auto report = validate(t);
    if (!report.ok()) throw std::invalid_argument("invalid Levy triplet: " + report.failures());
}

/// delta = E(X_1) = premium + int x Pi(dx).
inline double delta(const LevyTriplet& t) {
    if (!std::isfinite(t.premium)) throw std::invalid_argument("delta: premium must be finite");
    for (const auto& c : t.jumps.components()) {
        if (auto p = parameter_problem(c); !p.empty()) throw std::invalid_argument("delta: " + p);
    }
    double d = t.premium;
    for (const auto& c : t.jumps.components()) d += mean_jump_rate(c);
    return d;
}

/// Zero Gaussian part, no negative jumps and a non-negative premium: the
/// paths never decrease.
inline bool is_subordinator(const LevyTriplet& t) {
    return t.sigma2 == 0.0 && !t.jumps.has_negative_jumps() && t.premium >= 0.0;
}

}  // namespace levyruin
