#pragma once

#include <vector>

#include "levyruin/levy_model.hpp"
#include "levyruin/perturbed.hpp"
#include "oracles.hpp"

namespace testing_models {

/// Random valid triplet over every family and every pairing of two
/// components. delta is drawn directly in [-2, 4] and the premium backed out.
inline levyruin::LevyTriplet random_triplet(oracle::Draws& d) {
    using namespace levyruin;
    const auto exp_neg = [&] { return ExponentialNegative{d.log_uniform(0.1, 10.0), d.log_uniform(0.1, 10.0)}; };
    const auto exp_pos = [&] { return ExponentialPositive{d.log_uniform(0.1, 10.0), d.log_uniform(0.1, 10.0)}; };
    const auto tempered = [&] {
        return TemperedParetoNegative{d.log_uniform(0.1, 10.0), d.log_uniform(0.1, 10.0), d.uniform(2.0, 5.0),
                                      d.uniform(1.0, 3.0)};
    };
    std::vector<JumpComponent> comps;
    switch (d.integer(0, 6)) {
        case 0: break;
        case 1: comps = {exp_neg()}; break;
        case 2: comps = {exp_pos()}; break;
        case 3: comps = {tempered()}; break;
        case 4: comps = {exp_neg(), exp_pos()}; break;
        case 5: comps = {tempered(), exp_pos()}; break;
        default: comps = {exp_neg(), tempered()}; break;
    }
    LevyTriplet t;
    t.sigma2 = d.coin() ? 0.0 : d.log_uniform(0.01, 10.0);
    t.jumps = JumpMeasure(std::move(comps));
    double jump_drift = 0.0;
    for (const auto& c : t.jumps.components()) jump_drift += mean_jump_rate(c);
    t.premium = d.uniform(-2.0, 4.0) - jump_drift;
    if (t.premium == 0.0 && t.sigma2 == 0.0 && t.jumps.empty()) t.premium = 1.0;
    return t;
}

/// Perturbed model with all four parameters log-uniform on [1e-2, 1e2].
inline levyruin::PerturbedModel random_perturbed(oracle::Draws& d) {
    return {d.log_uniform(1e-2, 1e2), d.log_uniform(1e-2, 1e2), d.log_uniform(1e-2, 1e2), d.log_uniform(1e-2, 1e2)};
}

}  // namespace testing_models
