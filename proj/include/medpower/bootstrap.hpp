#pragma once

#include <array>
#include <span>

#include "medpower/core.hpp"
#include "medpower/rng.hpp"

namespace medpower {

// Bootstrap estimates of every path from one dataset: values[p] holds the
// resample estimates for path p, all paths coming from the same resamples so
// cross-method comparisons stay paired.
struct PathDistribution {
    std::array<std::vector<double>, kPathCount> values;
    long degenerate_redraws = 0;

    std::span<const double> path(Path p) const { return values[static_cast<int>(p)]; }
};

// Leave-one-out estimates: values[p][i] is path p refitted without row i.
struct JackknifeSet {
    std::array<std::vector<double>, kPathCount> values;

    std::span<const double> path(Path p) const { return values[static_cast<int>(p)]; }
};

// One bootstrap resample: n rows drawn from d with replacement, consuming
// exactly n index draws from the stream.
Dataset resample(const Dataset& d, Rng& rng);

// B resample estimates of all five paths. A resample whose design is singular
// (e.g. one row drawn n times) is discarded and redrawn, counted in
// degenerate_redraws; 10*B consecutive discards abandon the dataset with
// DegenerateData. Throws std::invalid_argument if B < 1.
PathDistribution bootstrap_distribution(const Dataset& d, int B, Rng& rng);

// Leave-one-out refits of all five paths. Requires at least 5 rows so every
// reduced dataset still satisfies the regression preconditions.
JackknifeSet jackknife_estimates(const Dataset& d);

// Jackknife acceleration: with d_i = mean(jack) - jack_i,
//   accel = sum(d_i^3) / (6 * (sum(d_i^2))^{3/2}),
// and 0 when all leave-one-out estimates are identical.
double acceleration(std::span<const double> jack);

// Bias-correction term z0: the normal quantile of the fraction of bootstrap
// values below the point estimate (ties counted at half weight), with the
// fraction clamped to [1/(2B), 1 - 1/(2B)] so z0 stays finite.
double bias_correction(std::span<const double> values, double point);

// ---------------------------------------------------------------------------
// Interval constructors. All three methods pick order statistics from the
// sorted bootstrap values through one shared rule — probability p maps to
// rank ceil(p*B) for the lower end and floor(p*B) for the upper, clamped to
// [1, B] — so the methods nest exactly: BCA with accel = 0 reproduces BC, and
// BC with z0 = 0 reproduces the plain percentile interval.
//
// Values may be passed in any order; each constructor sorts internally.
// All throw std::invalid_argument for empty values or alpha outside (0, 1).
// ---------------------------------------------------------------------------

ConfidenceInterval ci_percentile(std::span<const double> values, double alpha);

ConfidenceInterval ci_bc(std::span<const double> values, double point, double alpha);
ConfidenceInterval ci_bc_given_z0(std::span<const double> values, double z0, double alpha);

ConfidenceInterval ci_bca(std::span<const double> values, double point, double accel,
                          double alpha);
ConfidenceInterval ci_bca_given_z0(std::span<const double> values, double z0, double accel,
                                   double alpha);

}  // namespace medpower
