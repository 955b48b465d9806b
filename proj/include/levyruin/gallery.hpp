#pragma once

#include <string>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "levyruin/levy_model.hpp"
#include "levyruin/ruin_classifier.hpp"

namespace levyruin {

struct GalleryModel {
    std::string name;
    LevyTriplet triplet;
    RuinCase expected;
};

/// Built-in models covering all four regimes.
inline std::vector<GalleryModel> gallery() {
    // int_1^inf y^{-2} e^{-y} dy = E_2(1): mean claim rate of TP{1, 1, 3, 1},
    // added to the premium so that delta = 1.
    const double tp_mean_rate = boost::math::expint(2, 1.0);
    return {
        {"A_negative_drift", {1.0, 1.0, {ExponentialNegative{2.0, 1.0}}}, RuinCase::A},
        {"B_exponential_claims", {2.0, 0.0, {ExponentialNegative{1.0, 1.0}}}, RuinCase::B},
        {"B_perturbed", {2.0, 1.0, {ExponentialNegative{1.0, 1.0}}}, RuinCase::B},
        {"C_subordinator", {3.0, 0.0, {}}, RuinCase::C},
        {"D_tempered_pareto", {1.0 + tp_mean_rate, 0.0, {TemperedParetoNegative{1.0, 1.0, 3.0, 1.0}}}, RuinCase::D},
    };
}

}  // namespace levyruin
