#include "medpower/simulate.hpp"

#include <stdexcept>

namespace medpower {

std::uint64_t derive_seed(const SeedRecipe& r) {
    std::uint64_t z = mix64(r.master_seed);
    z = mix64(z ^ static_cast<std::uint64_t>(r.scenario_id));
    z = mix64(z ^ static_cast<std::uint64_t>(r.repeat_index));
    return z;
}

Dataset generate_dataset(const PathWeights& w, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be positive");

    Dataset d;
    d.x.resize(static_cast<std::size_t>(n));
    d.m.resize(static_cast<std::size_t>(n));
    d.y.resize(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const double ex = rng.next_normal(1.0);
        const double em = rng.next_normal(1.0);
        const double ey = rng.next_normal(1.0);
        const double x = ex;
        const double m = w.a * x + em;
        const double y = w.c_prime * x + w.b * m + ey;
        d.x[static_cast<std::size_t>(i)] = x;
        d.m[static_cast<std::size_t>(i)] = m;
        d.y[static_cast<std::size_t>(i)] = y;
    }
    return d;
}

Dataset generate_dataset(const PathWeights& w, int n, std::uint64_t seed) {
    Rng rng(seed);
    return generate_dataset(w, n, rng);
}

}  // namespace medpower
