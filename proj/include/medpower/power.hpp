#pragma once

#include <vector>

#include "medpower/core.hpp"

namespace medpower {

// What one repeat of a scenario concluded: the point estimates and, for each
// computed CI method, whether each path's interval excluded zero. A repeat
// whose bootstrap could not be completed is marked failed and carries no
// conclusions.
struct RepeatOutcome {
    int repeat_index = 0;
    bool failed = false;
    PathEstimates point;
    std::array<std::array<bool, kPathCount>, kMethodCount> significant{};
    long degenerate_redraws = 0;

    bool is_significant(CiMethod m, Path p) const {
        return significant[static_cast<int>(m)][static_cast<int>(p)];
    }
};

// One full repeat: derive the repeat's seed, draw a dataset, estimate the
// paths, bootstrap the path distributions, and test every requested method
// against every path. All methods read the same bootstrap distribution, so
// method comparisons are paired within a repeat. The jackknife (and the
// bootstrap index stream) are untouched by which methods are requested, so
// adding or dropping methods never perturbs the others' results.
// Requesting BCA requires n >= 5 (the jackknife's floor); violating that is
// std::invalid_argument. Propagates DegenerateData (and, in principle,
// SingularDesign from the point fit); the caller decides how to record the
// failure.
RepeatOutcome run_repeat(const Scenario& s, int repeat_index, MethodSet methods);

// The tolerated failure budget: strictly more than 1% of a scenario's
// repeats failing throws ScenarioFailed, anything at or under 1% passes.
void require_failure_budget(long scenario_id, long failures, int repeats);

// Order-independent merge of repeat outcomes into per-scenario counts.
// Failed repeats are excluded from both numerator and denominator.
PowerResult aggregate_outcomes(long scenario_id, MethodSet methods,
                               const std::vector<RepeatOutcome>& outcomes);

// Run all repeats of a scenario, optionally across several worker threads.
// Each repeat owns a seed derived from (master_seed, scenario id, repeat
// index), so the aggregated result is identical for any worker count or
// completion order. Throws ScenarioFailed when more than 1% of repeats fail.
PowerResult run_scenario(const Scenario& s, MethodSet methods, int workers = 1);

}  // namespace medpower
