#pragma once

#include <cstdint>

#include "medpower/core.hpp"
#include "medpower/rng.hpp"

namespace medpower {

// Identifies one repeat of one scenario under one master seed. The derived
// seed depends on all three fields, so any worker can run any repeat in any
// order and still draw exactly the stream that repeat owns.
struct SeedRecipe {
    std::uint64_t master_seed = 0;
    long scenario_id = 0;
    int repeat_index = 0;
};

// Deterministic seed derivation: three rounds of the SplitMix64 finalizer,
// folding in the scenario id and the repeat index between rounds. The
// finalizer is bijective, so structure in the inputs (small consecutive
// integers) cannot produce structured or colliding outputs.
std::uint64_t derive_seed(const SeedRecipe& r);

// Draw one synthetic dataset of n rows:
//   X = eX,  M = a*X + eM,  Y = c'*X + b*M + eY,
// with eX, eM, eY independent Normal(mean 1, sd 1). Rows are generated in
// order and each row draws its noise in the fixed order eX, eM, eY, so a
// given (weights, n, seed) triple always yields the identical dataset.
Dataset generate_dataset(const PathWeights& w, int n, std::uint64_t seed);

// Stream variant: continues an existing stream instead of seeding a new one,
// for callers that feed the same stream into later stages (e.g. bootstrap
// index draws after the dataset draws).
Dataset generate_dataset(const PathWeights& w, int n, Rng& rng);

}  // namespace medpower
