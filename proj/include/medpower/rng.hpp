#pragma once

#include <cstdint>
#include <random>

namespace medpower {

// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs can
// never collide; used as the mixing step when deriving per-repeat seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
// the standard pins down bit for bit) and layers the derived quantities —
// unit-interval doubles, bounded indices, normal draws — on top of raw 64-bit
// words using fixed arithmetic, so every stream is reproducible across
// platforms and compilers. The std::* distributions are deliberately avoided:
// their algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double strictly inside (0, 1): top 53 bits, offset by half an ulp.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform index in [0, n) via 128-bit multiply (Lemire); slight modulo
    // bias of < n / 2^64 is far below anything observable here.
    std::uint64_t next_index(std::uint64_t n) {
        const auto wide = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    // Normal draw with the given mean and unit standard deviation, by
    // inverse transform of a (0, 1) uniform.
    double next_normal(double mean);

private:
    std::mt19937_64 engine_;
};

}  // namespace medpower
