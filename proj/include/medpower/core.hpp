#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace medpower {

// ---------------------------------------------------------------------------
// Model vocabulary
//
// The simulated model is the classic three-variable mediation chain:
//   M = a*X + noise,  Y = b*M + c'*X + noise,
// with total effect c = c' + a*b estimated from the simple regression of Y
// on X. "Paths" below are the five quantities whose significance the power
// study tracks: a, b, c', c, and the indirect product a*b.
// ---------------------------------------------------------------------------

struct PathWeights {
    double a = 0.0;        // X -> M
    double b = 0.0;        // M -> Y
    double c_prime = 0.0;  // X -> Y holding M fixed
};

// Total effect of X on Y implied by the weights.
inline double total_effect(const PathWeights& w) {
    return w.c_prime + w.a * w.b;
}

enum class Path : int { A = 0, B = 1, CPrime = 2, CTotal = 3, AB = 4 };

inline constexpr int kPathCount = 5;
inline constexpr std::array<Path, kPathCount> kAllPaths = {
    Path::A, Path::B, Path::CPrime, Path::CTotal, Path::AB};

const char* to_string(Path p);
Path path_from_string(std::string_view name);  // throws std::invalid_argument

// One simulated sample. Parallel columns, row i is one observation.
struct Dataset {
    std::vector<double> x;
    std::vector<double> m;
    std::vector<double> y;

    std::size_t rows() const { return x.size(); }
};

// Point estimates of the five paths from one dataset.
struct PathEstimates {
    double a = 0.0;
    double b = 0.0;
    double c_prime = 0.0;
    double c_total = 0.0;
    double ab = 0.0;

    double value(Path p) const {
        switch (p) {
            case Path::A: return a;
            case Path::B: return b;
            case Path::CPrime: return c_prime;
            case Path::CTotal: return c_total;
            case Path::AB: return ab;
        }
        return 0.0;
    }
};

// ---------------------------------------------------------------------------
// Confidence intervals
// ---------------------------------------------------------------------------

enum class CiMethod : int { PER = 0, BC = 1, BCA = 2 };

inline constexpr int kMethodCount = 3;
inline constexpr std::array<CiMethod, kMethodCount> kAllMethods = {
    CiMethod::PER, CiMethod::BC, CiMethod::BCA};

const char* to_string(CiMethod m);
CiMethod method_from_string(std::string_view name);  // throws std::invalid_argument

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    CiMethod method = CiMethod::PER;
    double alpha = 0.0;
};

// Significance criterion: the interval lies strictly on one side of zero.
// An endpoint exactly at zero counts as covering it.
inline bool ci_excludes_zero(const ConfidenceInterval& ci) {
    return ci.lower > 0.0 || ci.upper < 0.0;
}

// Small value-type set of CI methods (which of the three to compute).
class MethodSet {
public:
    MethodSet() = default;

    static MethodSet all() { return MethodSet(0b111); }
    static MethodSet of(CiMethod m) { return MethodSet(1u << static_cast<int>(m)); }

    // Parse a comma-separated list such as "PER,BC". Throws ConfigInvalid on
    // unknown names or an empty list.
    static MethodSet parse(std::string_view list);

    MethodSet& add(CiMethod m) {
        bits_ |= 1u << static_cast<int>(m);
        return *this;
    }
    bool contains(CiMethod m) const { return bits_ & (1u << static_cast<int>(m)); }
    bool empty() const { return bits_ == 0; }

    std::vector<CiMethod> methods() const;
    std::string str() const;  // canonical "PER,BC,BCA" order

    friend bool operator==(MethodSet lhs, MethodSet rhs) { return lhs.bits_ == rhs.bits_; }

private:
    explicit MethodSet(unsigned bits) : bits_(bits) {}
    unsigned bits_ = 0;
};

// ---------------------------------------------------------------------------
// Scenarios and aggregated results
// ---------------------------------------------------------------------------

// One cell of the simulation grid plus the simulation controls.
struct Scenario {
    long id = 0;                    // stable identity; feeds seed derivation
    PathWeights weights;
    int n = 0;                      // observations per simulated dataset
    int resamples = 0;              // bootstrap draws per repeat (B)
    int repeats = 0;                // simulated datasets per scenario (R)
    double alpha = 0.05;            // two-sided CI level
    std::uint64_t master_seed = 0;
};

// Throws std::invalid_argument if the scenario violates its own contract
// (n >= 4, resamples >= 1, repeats >= 1, alpha in (0, 1)).
void validate(const Scenario& s);

// Power tallies for one scenario: how many repeats declared each path
// significant, per CI method.
struct PowerResult {
    long scenario_id = 0;
    MethodSet methods;              // which methods were actually computed
    std::array<std::array<int, kPathCount>, kMethodCount> significant{};
    int repeats_completed = 0;
    long degenerate_resamples = 0;  // redraws consumed across all repeats

    int count(CiMethod m, Path p) const {
        return significant[static_cast<int>(m)][static_cast<int>(p)];
    }
    double power(CiMethod m, Path p) const {
        return static_cast<double>(count(m, p)) / repeats_completed;
    }
};

}  // namespace medpower
