#pragma once

#include <span>

#include "medpower/core.hpp"

namespace medpower {

struct SimpleFit {
    double intercept = 0.0;
    double slope = 0.0;
};

struct BivariateFit {
    double intercept = 0.0;
    double coef_x = 0.0;  // first predictor
    double coef_m = 0.0;  // second predictor
};

// Least-squares line (with intercept) of response on one predictor.
// Throws std::invalid_argument for mismatched lengths or fewer than 3 rows,
// SingularDesign when the predictor is (numerically) constant.
SimpleFit fit_simple(std::span<const double> predictor, std::span<const double> response);

// Least-squares plane (with intercept) of response on two predictors.
// Throws std::invalid_argument for mismatched lengths or fewer than 4 rows,
// SingularDesign when the centered design is rank deficient at a relative
// tolerance of 1e-12 (constant or collinear predictors).
BivariateFit fit_bivariate(std::span<const double> x, std::span<const double> m,
                           std::span<const double> y);

// The three mediation regressions on one dataset:
//   M ~ X      -> a
//   Y ~ X + M  -> c', b
//   Y ~ X      -> c (total)
// plus the indirect product ab. The fitted coefficients satisfy
// c == c' + a*b up to floating-point rounding.
PathEstimates estimate_paths(const Dataset& d);

}  // namespace medpower
