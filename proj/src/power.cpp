#include "medpower/power.hpp"

#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>

#include "medpower/bootstrap.hpp"
#include "medpower/errors.hpp"
#include "medpower/regress.hpp"
#include "medpower/rng.hpp"
#include "medpower/simulate.hpp"

namespace medpower {

RepeatOutcome run_repeat(const Scenario& s, int repeat_index, MethodSet methods) {
    validate(s);
    if (repeat_index < 0 || repeat_index >= s.repeats) {
        throw std::invalid_argument("run_repeat: repeat_index out of range");
    }
    if (methods.empty()) throw std::invalid_argument("run_repeat: no CI methods requested");

    if (methods.contains(CiMethod::BCA) && s.n < 5) {
        throw std::invalid_argument("run_repeat: BCA needs n >= 5 for the jackknife");
    }

    RepeatOutcome out;
    out.repeat_index = repeat_index;

    const std::uint64_t seed = derive_seed({s.master_seed, s.id, repeat_index});
    Rng rng(seed);

    const Dataset d = generate_dataset(s.weights, s.n, rng);
    out.point = estimate_paths(d);
    const PathDistribution dist = bootstrap_distribution(d, s.resamples, rng);
    out.degenerate_redraws = dist.degenerate_redraws;

    // Jackknife only feeds the BCA acceleration; it consumes no randomness,
    // so skipping it cannot change what PER or BC conclude.
    std::array<double, kPathCount> accel{};
    if (methods.contains(CiMethod::BCA)) {
        const JackknifeSet jack = jackknife_estimates(d);
        for (Path p : kAllPaths) {
            accel[static_cast<int>(p)] = acceleration(jack.path(p));
        }
    }

    for (Path p : kAllPaths) {
        const auto pi = static_cast<int>(p);
        const std::span<const double> vals = dist.path(p);

        if (methods.contains(CiMethod::PER)) {
            const ConfidenceInterval ci = ci_percentile(vals, s.alpha);
            out.significant[static_cast<int>(CiMethod::PER)][pi] = ci_excludes_zero(ci);
        }
        if (methods.contains(CiMethod::BC) || methods.contains(CiMethod::BCA)) {
            const double z0 = bias_correction(vals, out.point.value(p));
            if (methods.contains(CiMethod::BC)) {
                const ConfidenceInterval ci = ci_bc_given_z0(vals, z0, s.alpha);
                out.significant[static_cast<int>(CiMethod::BC)][pi] = ci_excludes_zero(ci);
            }
            if (methods.contains(CiMethod::BCA)) {
                const ConfidenceInterval ci = ci_bca_given_z0(vals, z0, accel[pi], s.alpha);
                out.significant[static_cast<int>(CiMethod::BCA)][pi] = ci_excludes_zero(ci);
            }
        }
    }
    return out;
}

PowerResult aggregate_outcomes(long scenario_id, MethodSet methods,
                               const std::vector<RepeatOutcome>& outcomes) {
    PowerResult r;
    r.scenario_id = scenario_id;
    r.methods = methods;
    for (const RepeatOutcome& o : outcomes) {
        if (o.failed) continue;
        ++r.repeats_completed;
        r.degenerate_resamples += o.degenerate_redraws;
        for (CiMethod m : methods.methods()) {
            for (Path p : kAllPaths) {
                if (o.is_significant(m, p)) {
                    ++r.significant[static_cast<int>(m)][static_cast<int>(p)];
                }
            }
        }
    }
    return r;
}

void require_failure_budget(long scenario_id, long failures, int repeats) {
    if (failures * 100 > repeats) {
        throw ScenarioFailed("scenario " + std::to_string(scenario_id) + ": " +
                             std::to_string(failures) + " of " + std::to_string(repeats) +
                             " repeats failed");
    }
}

PowerResult run_scenario(const Scenario& s, MethodSet methods, int workers) {
    validate(s);
    if (methods.empty()) throw std::invalid_argument("run_scenario: no CI methods requested");
    if (workers < 1) throw std::invalid_argument("run_scenario: workers must be positive");
    if (methods.contains(CiMethod::BCA) && s.n < 5) {
        throw std::invalid_argument("run_scenario: BCA needs n >= 5 for the jackknife");
    }

    std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(s.repeats));

    auto run_one = [&](int idx) {
        try {
            outcomes[static_cast<std::size_t>(idx)] = run_repeat(s, idx, methods);
        } catch (const DegenerateData&) {
            outcomes[static_cast<std::size_t>(idx)].repeat_index = idx;
            outcomes[static_cast<std::size_t>(idx)].failed = true;
        } catch (const SingularDesign&) {
            outcomes[static_cast<std::size_t>(idx)].repeat_index = idx;
            outcomes[static_cast<std::size_t>(idx)].failed = true;
        }
    };

    if (workers == 1) {
        for (int i = 0; i < s.repeats; ++i) run_one(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < s.repeats; i = next.fetch_add(1)) {
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    PowerResult r = aggregate_outcomes(s.id, methods, outcomes);
    require_failure_budget(s.id, s.repeats - r.repeats_completed, s.repeats);
    return r;
}

}  // namespace medpower
