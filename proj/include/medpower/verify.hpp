#pragma once

#include <string>
#include <vector>

#include "medpower/core.hpp"
#include "medpower/regress.hpp"

namespace medpower {

// Independent reference implementations used to cross-check the production
// code. They deliberately take a different route — raw (uncentered) normal
// equations solved by Gaussian elimination with partial pivoting — so shared
// bugs with the centered closed forms in regress.cpp are implausible.
namespace oracle {

SimpleFit fit_simple(std::span<const double> predictor, std::span<const double> response);
BivariateFit fit_bivariate(std::span<const double> x, std::span<const double> m,
                           std::span<const double> y);
PathEstimates estimate_paths(const Dataset& d);

}  // namespace oracle

// One self-check's outcome.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // empty when passing
};

// The embedded verification suite: frozen reference values, worked examples,
// the regression oracle comparison, seed-derivation checks, and the interval
// nesting identities. Fast (well under a second); used by `medpower verify`.
std::vector<CheckResult> run_verification();

}  // namespace medpower
