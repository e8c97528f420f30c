#pragma once

// Umbrella header: directional multivariate Spearman footrule coefficients,
// exact and estimated, with copula samplers and a seeded study harness.

#include "footrule/coefficients.hpp"
#include "footrule/copulas.hpp"
#include "footrule/csv.hpp"
#include "footrule/dataset.hpp"
#include "footrule/direction.hpp"
#include "footrule/estimators.hpp"
#include "footrule/experiments.hpp"
#include "footrule/quadrature.hpp"
#include "footrule/rng.hpp"
#include "footrule/sampling.hpp"
#include "footrule/svg.hpp"
