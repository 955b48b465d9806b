#pragma once

#include "levyruin/csv.hpp"
#include "levyruin/format.hpp"
#include "levyruin/gallery.hpp"
#include "levyruin/laplace_exponent.hpp"
#include "levyruin/levy_model.hpp"
#include "levyruin/model_config.hpp"
#include "levyruin/path_simulator.hpp"
#include "levyruin/perturbed.hpp"
#include "levyruin/quadrature.hpp"
#include "levyruin/rng.hpp"
#include "levyruin/ruin_classifier.hpp"
