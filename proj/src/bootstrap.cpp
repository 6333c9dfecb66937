#include "medpower/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "medpower/errors.hpp"
#include "medpower/normal.hpp"
#include "medpower/regress.hpp"

namespace medpower {

namespace {

void resample_into(const Dataset& d, Rng& rng, Dataset& out) {
    const std::size_t n = d.rows();
    out.x.resize(n);
    out.m.resize(n);
    out.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto i = static_cast<std::size_t>(rng.next_index(n));
        out.x[j] = d.x[i];
        out.m[j] = d.m[i];
        out.y[j] = d.y[i];
    }
}

// Probability -> 1-based order-statistic rank, shared by every CI method.
// p*B lands exactly on an integer in the common cases (e.g. alpha = 0.05,
// B = 1000), where binary rounding of p could otherwise push ceil/floor off
// by one; the 1e-9 nudge restores the exact-arithmetic answer and is far too
// small to matter anywhere else.
struct RankPair {
    std::size_t lo;  // 0-based after conversion
    std::size_t hi;
};

RankPair ranks_for(double p_lo, double p_hi, std::size_t b) {
    const double nb = static_cast<double>(b);
    const double clamp_lo = 1.0 / (2.0 * nb);
    const double clamp_hi = 1.0 - clamp_lo;
    p_lo = std::clamp(p_lo, clamp_lo, clamp_hi);
    p_hi = std::clamp(p_hi, clamp_lo, clamp_hi);

    auto lo = static_cast<long>(std::ceil(p_lo * nb - 1e-9));
    auto hi = static_cast<long>(std::floor(p_hi * nb + 1e-9));
    lo = std::clamp(lo, 1l, static_cast<long>(b));
    hi = std::clamp(hi, 1l, static_cast<long>(b));
    return {static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - 1)};
}

std::vector<double> sorted_copy(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return v;
}

void check_ci_args(std::span<const double> values, double alpha) {
    if (values.empty()) throw std::invalid_argument("confidence interval: no bootstrap values");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("confidence interval: alpha must lie in (0, 1)");
    }
}

ConfidenceInterval interval_at(std::span<const double> values, double p_lo, double p_hi,
                               CiMethod method, double alpha) {
    const std::vector<double> v = sorted_copy(values);
    const RankPair r = ranks_for(p_lo, p_hi, v.size());
    return ConfidenceInterval{v[r.lo], v[r.hi], method, alpha};
}

}  // namespace

Dataset resample(const Dataset& d, Rng& rng) {
    if (d.rows() == 0) throw std::invalid_argument("resample: empty dataset");
    Dataset out;
    resample_into(d, rng, out);
    return out;
}

PathDistribution bootstrap_distribution(const Dataset& d, int B, Rng& rng) {
    if (B < 1) throw std::invalid_argument("bootstrap_distribution: B must be positive");
    if (d.rows() < 4) throw std::invalid_argument("bootstrap_distribution: need at least 4 rows");

    PathDistribution out;
    for (auto& v : out.values) v.reserve(static_cast<std::size_t>(B));

    Dataset scratch;
    const long budget = 10l * B;
    long consecutive = 0;
    int collected = 0;
    while (collected < B) {
        resample_into(d, rng, scratch);
        try {
            const PathEstimates e = estimate_paths(scratch);
            for (Path p : kAllPaths) {
                out.values[static_cast<int>(p)].push_back(e.value(p));
            }
            ++collected;
            consecutive = 0;
        } catch (const SingularDesign&) {
            ++out.degenerate_redraws;
            if (++consecutive >= budget) {
                throw DegenerateData(
                    "bootstrap_distribution: resamples kept producing singular designs");
            }
        }
    }
    return out;
}

JackknifeSet jackknife_estimates(const Dataset& d) {
    if (d.rows() < 5) throw std::invalid_argument("jackknife_estimates: need at least 5 rows");

    const std::size_t n = d.rows();
    JackknifeSet out;
    for (auto& v : out.values) v.reserve(n);

    Dataset reduced;
    reduced.x.resize(n - 1);
    reduced.m.resize(n - 1);
    reduced.y.resize(n - 1);
    for (std::size_t skip = 0; skip < n; ++skip) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == skip) continue;
            reduced.x[w] = d.x[i];
            reduced.m[w] = d.m[i];
            reduced.y[w] = d.y[i];
            ++w;
        }
        const PathEstimates e = estimate_paths(reduced);
        for (Path p : kAllPaths) {
            out.values[static_cast<int>(p)].push_back(e.value(p));
        }
    }
    return out;
}

double acceleration(std::span<const double> jack) {
    if (jack.empty()) throw std::invalid_argument("acceleration: no jackknife values");

    double mean = 0.0;
    for (double v : jack) mean += v;
    mean /= static_cast<double>(jack.size());

    double d2 = 0.0, d3 = 0.0;
    for (double v : jack) {
        const double d = mean - v;
        d2 += d * d;
        d3 += d * d * d;
    }
    if (d2 == 0.0) return 0.0;
    return d3 / (6.0 * std::pow(d2, 1.5));
}

double bias_correction(std::span<const double> values, double point) {
    if (values.empty()) throw std::invalid_argument("bias_correction: no bootstrap values");

    const double b = static_cast<double>(values.size());
    double below = 0.0;
    for (double v : values) {
        if (v < point) below += 1.0;
        else if (v == point) below += 0.5;
    }
    double prop = below / b;
    prop = std::clamp(prop, 1.0 / (2.0 * b), 1.0 - 1.0 / (2.0 * b));
    return normal_quantile(prop);
}

namespace {

// Adjusted tail probability shared by BC and BCA. With accel = 0 this is
// exactly the BC adjustment (the same expression, evaluated identically, so
// the two methods agree bit for bit), and when the acceleration denominator
// 1 - accel*(z0 + z) is not positive the transform has left its valid domain
// and the probability saturates toward the side the tail was heading.
double adjusted_prob(double z0, double accel, double z_tail) {
    const double w = z0 + z_tail;
    const double denom = 1.0 - accel * w;
    if (denom <= 0.0) return (w >= 0.0) ? 1.0 : 0.0;
    return normal_cdf(z0 + w / denom);
}

ConfidenceInterval ci_adjusted(std::span<const double> values, double z0, double accel,
                               double alpha, CiMethod method) {
    const double z_lo = normal_quantile(alpha / 2.0);
    const double z_hi = normal_quantile(1.0 - alpha / 2.0);
    const double p_lo = adjusted_prob(z0, accel, z_lo);
    const double p_hi = adjusted_prob(z0, accel, z_hi);
    return interval_at(values, p_lo, p_hi, method, alpha);
}

}  // namespace

ConfidenceInterval ci_percentile(std::span<const double> values, double alpha) {
    check_ci_args(values, alpha);
    return interval_at(values, alpha / 2.0, 1.0 - alpha / 2.0, CiMethod::PER, alpha);
}

ConfidenceInterval ci_bc_given_z0(std::span<const double> values, double z0, double alpha) {
    check_ci_args(values, alpha);
    return ci_adjusted(values, z0, 0.0, alpha, CiMethod::BC);
}

ConfidenceInterval ci_bc(std::span<const double> values, double point, double alpha) {
    check_ci_args(values, alpha);
    return ci_bc_given_z0(values, bias_correction(values, point), alpha);
}

ConfidenceInterval ci_bca_given_z0(std::span<const double> values, double z0, double accel,
                                   double alpha) {
    check_ci_args(values, alpha);
    return ci_adjusted(values, z0, accel, alpha, CiMethod::BCA);
}

ConfidenceInterval ci_bca(std::span<const double> values, double point, double accel,
                          double alpha) {
    check_ci_args(values, alpha);
    return ci_bca_given_z0(values, bias_correction(values, point), accel, alpha);
}

}  // namespace medpower
