#include "medpower/regress.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

#include "medpower/errors.hpp"

namespace medpower {

namespace {

constexpr double kRankTol = 1e-12;

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

SimpleFit fit_simple(std::span<const double> predictor, std::span<const double> response) {
    const std::size_t n = predictor.size();
    if (response.size() != n) {
        throw std::invalid_argument("fit_simple: predictor/response lengths differ");
    }
    if (n < 3) throw std::invalid_argument("fit_simple: need at least 3 rows");

    const double mx = mean_of(predictor);
    const double my = mean_of(response);

    double sxx = 0.0, sxy = 0.0, raw_xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = predictor[i] - mx;
        sxx += dx * dx;
        sxy += dx * (response[i] - my);
        raw_xx += predictor[i] * predictor[i];
    }
    if (sxx <= kRankTol * raw_xx) {
        throw SingularDesign("fit_simple: predictor is constant");
    }

    SimpleFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

BivariateFit fit_bivariate(std::span<const double> x, std::span<const double> m,
                           std::span<const double> y) {
    const std::size_t n = x.size();
    if (m.size() != n || y.size() != n) {
        throw std::invalid_argument("fit_bivariate: column lengths differ");
    }
    if (n < 4) throw std::invalid_argument("fit_bivariate: need at least 4 rows");

    const double mx = mean_of(x);
    const double mm = mean_of(m);
    const double my = mean_of(y);

    double sxx = 0.0, smm = 0.0, sxm = 0.0, sxy = 0.0, smy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dm = m[i] - mm;
        const double dy = y[i] - my;
        sxx += dx * dx;
        smm += dm * dm;
        sxm += dx * dm;
        sxy += dx * dy;
        smy += dm * dy;
    }

    const double scale = std::max(sxx, smm);
    const double det = sxx * smm - sxm * sxm;
    if (det <= kRankTol * scale * scale) {
        throw SingularDesign("fit_bivariate: predictors are constant or collinear");
    }

    BivariateFit f;
    f.coef_x = (smm * sxy - sxm * smy) / det;
    f.coef_m = (sxx * smy - sxm * sxy) / det;
    f.intercept = my - f.coef_x * mx - f.coef_m * mm;
    return f;
}

PathEstimates estimate_paths(const Dataset& d) {
    const std::size_t n = d.rows();
    if (d.m.size() != n || d.y.size() != n) {
        throw std::invalid_argument("estimate_paths: column lengths differ");
    }
    if (n < 4) throw std::invalid_argument("estimate_paths: need at least 4 rows");

    // One fused pass over the columns; the closed forms below are exactly the
    // ones fit_simple / fit_bivariate apply, accumulated in the same order.
    const double mx = mean_of(d.x);
    const double mm = mean_of(d.m);
    const double my = mean_of(d.y);

    double sxx = 0.0, smm = 0.0, sxm = 0.0, sxy = 0.0, smy = 0.0, raw_xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = d.x[i] - mx;
        const double dm = d.m[i] - mm;
        const double dy = d.y[i] - my;
        sxx += dx * dx;
        smm += dm * dm;
        sxm += dx * dm;
        sxy += dx * dy;
        smy += dm * dy;
        raw_xx += d.x[i] * d.x[i];
    }

    if (sxx <= kRankTol * raw_xx) {
        throw SingularDesign("estimate_paths: X is constant");
    }
    const double scale = std::max(sxx, smm);
    const double det = sxx * smm - sxm * sxm;
    if (det <= kRankTol * scale * scale) {
        throw SingularDesign("estimate_paths: X and M are constant or collinear");
    }

    PathEstimates e;
    e.a = sxm / sxx;                              // M ~ X
    e.c_prime = (smm * sxy - sxm * smy) / det;    // Y ~ X + M
    e.b = (sxx * smy - sxm * sxy) / det;
    e.c_total = sxy / sxx;                        // Y ~ X
    e.ab = e.a * e.b;
    return e;
}

}  // namespace medpower
