#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "medpower/errors.hpp"
#include "medpower/regress.hpp"
#include "medpower/rng.hpp"
#include "medpower/simulate.hpp"
#include "medpower/verify.hpp"

using namespace medpower;

TEST_CASE("fit_simple recovers an exact line") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> y{3, 5, 7};
    const SimpleFit f = fit_simple(x, y);
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_simple matches the closed-form normal equations") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 1, 4, 3};
    const SimpleFit f = fit_simple(x, y);
    CHECK(f.slope == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_simple rejects a constant predictor") {
    const std::vector<double> x{5, 5, 5, 5};
    const std::vector<double> y{1, 2, 3, 4};
    CHECK_THROWS_AS(fit_simple(x, y), SingularDesign);
}

TEST_CASE("fit_simple validates its inputs") {
    const std::vector<double> two{1, 2};
    const std::vector<double> three{1, 2, 3};
    CHECK_THROWS_AS(fit_simple(two, two), std::invalid_argument);
    CHECK_THROWS_AS(fit_simple(three, two), std::invalid_argument);
}

TEST_CASE("fit_simple slope equals covariance over variance") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + static_cast<int>(rng.next_index(20));
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.next_normal(0.0);
            y[i] = rng.next_normal(0.5) + 0.3 * x[i];
        }
        double mx = 0, my = 0;
        for (int i = 0; i < n; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        double sxy = 0, sxx = 0;
        for (int i = 0; i < n; ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        CHECK(fit_simple(x, y).slope == doctest::Approx(sxy / sxx).epsilon(1e-12));
    }
}

TEST_CASE("fit_bivariate recovers a noiseless plane") {
    const std::vector<double> x{0, 1, 2, 3, 1};
    const std::vector<double> m{1, 0, 2, 1, 3};
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 + 2.0 * x[i] + 3.0 * m[i];
    const BivariateFit f = fit_bivariate(x, m, y);
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.coef_x == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.coef_m == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("fit_bivariate rejects collinear predictors") {
    const std::vector<double> x{1, 2, 3, 4};
    std::vector<double> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = 2.0 * x[i];
    const std::vector<double> y{1, 3, 2, 4};
    CHECK_THROWS_AS(fit_bivariate(x, m, y), SingularDesign);
}

TEST_CASE("fit_bivariate matches an independent normal-equation solver") {
    Rng rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_index(30));
        std::vector<double> x(n), m(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.next_normal(1.0);
            m[i] = rng.next_normal(1.0) + 0.4 * x[i];
            y[i] = rng.next_normal(1.0) + 0.2 * x[i] - 0.5 * m[i];
        }
        const BivariateFit got = fit_bivariate(x, m, y);
        const BivariateFit want = oracle::fit_bivariate(x, m, y);
        CHECK(got.intercept == doctest::Approx(want.intercept).epsilon(1e-10));
        CHECK(got.coef_x == doctest::Approx(want.coef_x).epsilon(1e-10));
        CHECK(got.coef_m == doctest::Approx(want.coef_m).epsilon(1e-10));
    }
}

TEST_CASE("residuals behave like least squares with an intercept") {
    Rng rng(89);
    const int n = 40;
    std::vector<double> x(n), m(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.next_normal(1.0);
        m[i] = rng.next_normal(1.0) + 0.3 * x[i];
        y[i] = rng.next_normal(1.0) + 0.1 * x[i] + 0.6 * m[i];
    }
    const BivariateFit f = fit_bivariate(x, m, y);
    double sum = 0.0, dot_x = 0.0, dot_m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.coef_x * x[i] + f.coef_m * m[i]);
        sum += r;
        dot_x += r * x[i];
        dot_m += r * m[i];
    }
    CHECK(std::fabs(sum) < 1e-9);
    CHECK(std::fabs(dot_x) < 1e-9);
    CHECK(std::fabs(dot_m) < 1e-9);
}

TEST_CASE("estimate_paths satisfies the total-effect decomposition exactly") {
    Rng rng(2025);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 6 + static_cast<int>(rng.next_index(40));
        const PathWeights w{rng.next_unit() - 0.5, rng.next_unit() - 0.5, rng.next_unit() - 0.5};
        const Dataset d = generate_dataset(w, n, rng);
        const PathEstimates e = estimate_paths(d);
        CHECK(e.ab == e.a * e.b);
        CHECK(std::fabs(e.c_total - (e.c_prime + e.a * e.b)) < 1e-10);
    }
}

TEST_CASE("estimate_paths is consistent at large n") {
    const PathWeights w{0.3, 0.3, 0.1};
    const Dataset d = generate_dataset(w, 1000000, 5150u);
    const PathEstimates e = estimate_paths(d);
    CHECK(std::fabs(e.a - 0.3) < 0.01);
    CHECK(std::fabs(e.b - 0.3) < 0.01);
    CHECK(std::fabs(e.c_prime - 0.1) < 0.01);
    CHECK(std::fabs(e.c_total - 0.19) < 0.01);
}

TEST_CASE("estimate_paths propagates a degenerate design") {
    Dataset d;
    d.x = {2, 2, 2, 2, 2};
    d.m = {1, 2, 3, 4, 5};
    d.y = {1, 2, 2, 3, 4};
    CHECK_THROWS_AS(estimate_paths(d), SingularDesign);
}

TEST_CASE("shifting the response moves only intercepts") {
    Rng rng(61);
    const int n = 25;
    std::vector<double> x(n), m(n), y(n), y_shift(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.next_normal(1.0);
        m[i] = rng.next_normal(1.0) + 0.2 * x[i];
        y[i] = rng.next_normal(1.0) + 0.4 * x[i] + 0.3 * m[i];
        y_shift[i] = y[i] + 10.0;
    }
    const BivariateFit f0 = fit_bivariate(x, m, y);
    const BivariateFit f1 = fit_bivariate(x, m, y_shift);
    CHECK(f1.coef_x == doctest::Approx(f0.coef_x).epsilon(1e-12));
    CHECK(f1.coef_m == doctest::Approx(f0.coef_m).epsilon(1e-12));
    CHECK(f1.intercept == doctest::Approx(f0.intercept + 10.0).epsilon(1e-12));
}
