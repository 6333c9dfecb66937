#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace medpower {

// Regression design matrix is rank deficient (constant or collinear predictors).
struct SingularDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bootstrap run could not produce usable resamples within the redraw budget.
struct DegenerateData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Too many repeats of a scenario failed for its power estimate to be trusted.
struct ScenarioFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A run configuration file is malformed or describes an impossible grid.
struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A stored result disagrees with the manifest it is supposed to belong to.
struct ConfigMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A figure dataset was requested from results that lack required scenarios.
struct MissingScenarios : std::runtime_error {
    MissingScenarios(const std::string& what, std::vector<std::string> missing_keys)
        : std::runtime_error(what), missing(std::move(missing_keys)) {}
    std::vector<std::string> missing;
};

// Figure id outside the set this tool knows how to assemble.
struct UnknownFigure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation that needs data received none.
struct EmptyData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace medpower
