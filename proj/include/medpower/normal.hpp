#pragma once

namespace medpower {

// Standard normal CDF, accurate over the full double range.
double normal_cdf(double x);

// Standard normal quantile (inverse CDF) for p in (0, 1).
// Absolute error below 1e-9 across p in [1e-7, 1 - 1e-7]; throws
// std::invalid_argument outside (0, 1).
double normal_quantile(double p);

}  // namespace medpower
