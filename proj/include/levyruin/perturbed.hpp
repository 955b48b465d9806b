#pragma once

// Compound Poisson claims with exponential sizes, premium drift and a
// Brownian perturbation:  X_t = p t + sigma W_t - sum of Exp(alpha) claims
// arriving at rate beta. Psi factors as -A(gamma) B(gamma) / 2 with
//   A(gamma) = gamma / (alpha - gamma)
//   B(gamma) = sigma^2 gamma^2 - (sigma^2 alpha + 2p) gamma + 2(p alpha - beta)

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "levyruin/format.hpp"
#include "levyruin/levy_model.hpp"
#include "levyruin/ruin_classifier.hpp"

namespace levyruin {

struct PerturbedModel {
    double p = 0.0;
    double sigma2 = 0.0;
    double beta = 0.0;
    double alpha = 0.0;

    void validate() const {
        const auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
        if (bad(p) || bad(sigma2) || bad(beta) || bad(alpha))
            throw std::invalid_argument("perturbed model: p, sigma2, beta, alpha must be positive and finite (got p=" +
                                        format_double(p) + " sigma2=" + format_double(sigma2) +
                                        " beta=" + format_double(beta) + " alpha=" + format_double(alpha) + ")");
    }

    /// (sigma^2 alpha - 2p)^2 + 8 sigma^2 beta
    double discriminant() const {
        const double d = sigma2 * alpha - 2.0 * p;
        return d * d + 8.0 * sigma2 * beta;
    }

    double gamma_plus() const { return (linear_coefficient() + std::sqrt(discriminant())) / (2.0 * sigma2); }

    /// Smaller root of B, taken from the product of the roots to avoid
    /// cancellation when sqrt(discriminant) is close to sigma^2 alpha + 2p.
    double gamma_minus() const {
        return 4.0 * (p * alpha - beta) / (linear_coefficient() + std::sqrt(discriminant()));
    }

    double delta() const { return p - beta / alpha; }

    LevyTriplet to_triplet() const { return {p, sigma2, {ExponentialNegative{beta, alpha}}}; }

    double linear_coefficient() const { return sigma2 * alpha + 2.0 * p; }
};

struct PsiFactors {
    double a = 0.0;
    double b = 0.0;
    double psi = 0.0;
};

inline PsiFactors factor_psi(const PerturbedModel& m, double gamma) {
    m.validate();
    if (!(gamma >= 0.0)) throw std::domain_error("factor_psi: gamma must be >= 0");
    if (!(gamma < m.alpha)) throw std::domain_error("factor_psi: gamma must be < alpha");
    PsiFactors f;
    f.a = gamma / (m.alpha - gamma);
    f.b = m.sigma2 * gamma * gamma - m.linear_coefficient() * gamma + 2.0 * (m.p * m.alpha - m.beta);
    f.psi = -0.5 * f.a * f.b;
    return f;
}

/// Regime read off the closed-form roots.
inline RuinClassification classify_perturbed(const PerturbedModel& m) {
    m.validate();
    RuinClassification out;
    out.delta = m.delta();
    out.gamma_c = m.alpha;
    if (out.delta <= 0.0) {
        out.ruin_case = RuinCase::A;
        return out;
    }
    const double gm = m.gamma_minus();
    if (gm < m.alpha) {
        out.ruin_case = RuinCase::B;
        out.rate = gm;
        out.root_residual = std::fabs(factor_psi(m, gm).psi);
        return out;
    }
    out.ruin_case = RuinCase::D;
    out.rate = m.alpha;
    out.warnings.push_back("gamma_minus=" + format_double(gm) + " >= alpha=" + format_double(m.alpha) +
                           ": this branch contradicts B(alpha) = -2 beta < 0");
    return out;
}

struct AgreementReport {
    RuinClassification closed_form;
    std::optional<RuinClassification> generic;
    bool cases_agree = false;
    double rate_difference = std::numeric_limits<double>::quiet_NaN();
    bool agree = false;
    std::string note;
};

/// Runs the closed form and the generic classifier on the same model and
/// reports whether case and rate agree within tol. Never throws on disagreement.
inline AgreementReport cross_check(const PerturbedModel& m, double tol = 1e-9) {
    AgreementReport r;
    r.closed_form = classify_perturbed(m);
    try {
        r.generic = classify(m.to_triplet());
    } catch (const ClassificationError& e) {
        r.note = std::string("generic classifier: ") + e.what();
        return r;
    }
    r.cases_agree = r.generic->ruin_case == r.closed_form.ruin_case;
    r.rate_difference = std::fabs(r.generic->rate - r.closed_form.rate);
    r.agree = r.cases_agree && r.rate_difference <= tol;
    if (!r.cases_agree) {
        r.note = "case mismatch: closed form " + to_string(r.closed_form.ruin_case) + ", generic " +
                 to_string(r.generic->ruin_case);
    } else if (!r.agree) {
        r.note = "rate mismatch: |" + format_double(r.closed_form.rate) + " - " + format_double(r.generic->rate) +
                 "| = " + format_double(r.rate_difference) + " > " + format_double(tol);
    }
    return r;
}

/// The perturbed parameters of a triplet with sigma2 > 0, positive premium
/// and a single exponential claim component; nullopt for any other shape.
inline std::optional<PerturbedModel> as_perturbed(const LevyTriplet& t) {
    if (!(t.sigma2 > 0.0) || !(t.premium > 0.0)) return std::nullopt;
    const auto comps = t.jumps.components();
    if (comps.size() != 1) return std::nullopt;
    const auto* e = std::get_if<ExponentialNegative>(&comps[0]);
    if (!e) return std::nullopt;
    return PerturbedModel{t.premium, t.sigma2, e->beta, e->alpha};
}

}  // namespace levyruin
