#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyruin/format.hpp"
#include "levyruin/laplace_exponent.hpp"
#include "levyruin/levy_model.hpp"

namespace levyruin {

/// The four ultimate-ruin regimes of an integrable, light-tailed Levy risk process.
enum class RuinCase {
    A,  ///< ruin is almost sure (delta <= 0)
    B,  ///< Lundberg bound e^{-gamma0 u}, gamma0 the positive root of Psi
    C,  ///< subordinator, never ruined
    D,  ///< no root below gamma_c; bound e^{-gamma_c u}
};

inline char to_char(RuinCase c) {
    switch (c) {
        case RuinCase::A: return 'A';
        case RuinCase::B: return 'B';
        case RuinCase::C: return 'C';
        case RuinCase::D: return 'D';
    }
    return '?';
}

inline std::string to_string(RuinCase c) { return std::string(1, to_char(c)); }

inline const char* case_label(RuinCase c) {
    switch (c) {
        case RuinCase::A: return "almost sure ruin";
        case RuinCase::B: return "Lundberg bound";
        case RuinCase::C: return "never ruined";
        case RuinCase::D: return "critical exponent bound";
    }
    return "?";
}

inline constexpr double default_root_tol = 1e-10;

/// Raised when the regime cannot be decided; `what()` carries the diagnostics.
class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RootSearch {
    bool found = false;
    double gamma0 = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();  ///< |Psi(gamma0)|
    double lower = 0.0;                                          ///< final bracket, Psi(lower) <= 0
    double upper = 0.0;                                          ///< Psi(upper) > 0
    std::vector<PsiSample> samples;                              ///< psi_prime left at 0
};

struct RuinClassification {
    RuinCase ruin_case = RuinCase::A;
    double rate = 0.0;  ///< gamma0 for B, gamma_c for D, 0 otherwise
    double delta = 0.0;
    double gamma_c = 0.0;
    double tol = default_root_tol;
    double root_residual = std::numeric_limits<double>::quiet_NaN();
    PsiLimit limit;                    ///< refinement towards gamma_c, when it was needed
    std::vector<PsiSample> samples;    ///< Psi evaluations that drove the decision
    std::vector<std::string> warnings;
};

namespace detail {

inline double psi_logged(const LaplaceExponent& le, double g, std::vector<PsiSample>& log) {
    const double v = le.psi(g);
    log.push_back({g, v, 0.0});
    return v;
}

}  // namespace detail

/// Positive root of Psi for delta > 0. Brackets by doubling from tol up to
/// gamma_c (1 - 2^-40), continuing along gamma_c (1 - 2^-k) if that is not
/// yet enough, then bisects until the bracket is below tol * max(1, gamma)
/// and |Psi| <= tol, or until the bracket cannot shrink in double precision.
/// `found` is false when Psi stays non-positive up to gamma_c.
inline RootSearch find_root(const LaplaceExponent& le, double tol = default_root_tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("find_root: tol must be positive and finite");
    if (!(le.delta() > 0.0)) throw std::invalid_argument("find_root: requires delta > 0");

    RootSearch r;
    const double gc = le.gamma_c();
    const bool bounded = std::isfinite(gc);
    const double cap = bounded ? gc * (1.0 - std::ldexp(1.0, -40)) : std::numeric_limits<double>::max();

    double lo = 0.0;
    double hi = tol;
    double psi_lo = 0.0;
    double psi_hi = 0.0;
    bool bracketed = false;
    while (true) {
        if (hi >= cap) hi = cap;
        psi_hi = detail::psi_logged(le, hi, r.samples);
        if (psi_hi > 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        psi_lo = psi_hi;
        if (hi == cap) break;
        hi *= 2.0;
    }
    for (int k = 41; !bracketed && bounded && k <= 60; ++k) {
        const double g = gc * (1.0 - std::ldexp(1.0, -k));
        if (!(g > lo && g < gc)) break;
        const double v = detail::psi_logged(le, g, r.samples);
        if (v > 0.0) {
            hi = g;
            psi_hi = v;
            bracketed = true;
        } else {
            lo = g;
            psi_lo = v;
        }
    }
    if (!bracketed) {
        r.lower = lo;
        r.upper = lo;
        return r;
    }

    while (true) {
        const double width = hi - lo;
        const bool narrow = width <= tol * std::max(1.0, hi);
        const double best = std::min(std::fabs(psi_lo), std::fabs(psi_hi));
        if (narrow && best <= tol) break;
        const double mid = lo + 0.5 * width;
        if (!(mid > lo && mid < hi)) break;
        const double v = detail::psi_logged(le, mid, r.samples);
        if (v > 0.0) {
            hi = mid;
            psi_hi = v;
        } else {
            lo = mid;
            psi_lo = v;
        }
    }
    r.found = true;
    r.lower = lo;
    r.upper = hi;
    if (std::fabs(psi_lo) <= std::fabs(psi_hi) && lo > 0.0) {
        r.gamma0 = lo;
        r.residual = std::fabs(psi_lo);
    } else {
        r.gamma0 = hi;
        r.residual = std::fabs(psi_hi);
    }
    return r;
}

/// Decides the ruin regime of a validated triplet.
inline RuinClassification classify(const LaplaceExponent& le, double tol = default_root_tol) {
    RuinClassification out;
    out.delta = le.delta();
    out.gamma_c = le.gamma_c();
    out.tol = tol;

    if (out.delta <= 0.0) {
        out.ruin_case = RuinCase::A;
        return out;
    }
    if (is_subordinator(le.triplet())) {
        out.ruin_case = RuinCase::C;
        return out;
    }

    if (std::isfinite(out.gamma_c)) {
        out.limit = le.limit_at_gamma_c();
        if (out.limit.status == LimitStatus::inconclusive) {
            throw ClassificationError("inconclusive: Psi near gamma_c=" + format_double(out.gamma_c) +
                                      " neither converged nor diverged after " +
                                      std::to_string(out.limit.refinements) + " refinements (last value " +
                                      format_double(out.limit.value) + ")");
        }
        if (!(out.limit.value > 0.0)) {
            out.ruin_case = RuinCase::D;
            out.rate = out.gamma_c;
            return out;
        }
    }

    auto root = find_root(le, tol);
    out.samples = std::move(root.samples);
    if (!root.found) {
        throw ClassificationError("inconclusive: no sign change of Psi found below gamma_c=" +
                                  format_double(out.gamma_c) + " although delta=" + format_double(out.delta) +
                                  " > 0 and the limit at gamma_c is positive");
    }
    out.ruin_case = RuinCase::B;
    out.rate = root.gamma0;
    out.root_residual = root.residual;
    if (root.residual > tol) {
        out.warnings.push_back("root residual " + format_double(root.residual) + " exceeds tol " +
                               format_double(tol) + " at double-precision bracket [" + format_double(root.lower) +
                               ", " + format_double(root.upper) + "]");
    }
    return out;
}

inline RuinClassification classify(const LevyTriplet& t, double tol = default_root_tol,
                                   EvalMode mode = EvalMode::closed_form) {
    return classify(LaplaceExponent(t, mode), tol);
}

/// Upper bound on the ultimate ruin probability from initial capital u.
inline double bound(RuinCase c, double rate, double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("bound: u must be >= 0");
    switch (c) {
        case RuinCase::A: return 1.0;
        case RuinCase::B:
        case RuinCase::D: return std::exp(-rate * u);
        case RuinCase::C: return 0.0;
    }
    return 1.0;
}

inline double bound(const RuinClassification& c, double u) { return bound(c.ruin_case, c.rate, u); }

/// `case=<A|B|C|D> rate=<x> delta=<x> gamma_c=<x|inf>`
inline std::string summary_line(const RuinClassification& c) {
    return "case=" + to_string(c.ruin_case) + " rate=" + format_double(c.rate) + " delta=" +
           format_double(c.delta) + " gamma_c=" + format_double(c.gamma_c);
}

/// Multi-line human-readable report.
inline std::string report(const RuinClassification& c) {
    std::ostringstream os;
    os << "case:           " << to_string(c.ruin_case) << " (" << case_label(c.ruin_case) << ")\n";
    os << "rate:           " << format_double(c.rate) << '\n';
    os << "delta:          " << format_double(c.delta) << '\n';
    os << "gamma_c:        " << format_double(c.gamma_c) << '\n';
    if (c.ruin_case == RuinCase::B) {
        os << "root residual:  " << format_double(c.root_residual) << " (tol " << format_double(c.tol) << ")\n";
        os << "psi evaluations: " << c.samples.size() << '\n';
    }
    if (c.limit.refinements > 0) {
        os << "psi at gamma_c-: " << to_string(c.limit.status) << ' ' << format_double(c.limit.value) << " after "
           << c.limit.refinements << " refinements\n";
    }
    for (const auto& w : c.warnings) os << "warning:        " << w << '\n';
    return os.str();
}

}  // namespace levyruin
