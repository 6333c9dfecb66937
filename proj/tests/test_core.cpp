#include <doctest.h>

#include <stdexcept>

#include "medpower/core.hpp"
#include "medpower/errors.hpp"
#include "medpower/rng.hpp"

using namespace medpower;

TEST_CASE("total_effect combines direct and indirect contributions") {
    CHECK(total_effect({0.3, 0.3, 0.1}) == doctest::Approx(0.19).epsilon(1e-15));
    CHECK(total_effect({0.0, 0.0, 0.0}) == 0.0);
    CHECK(total_effect({0.5, -0.3, 0.2}) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("total_effect is symmetric in a and b") {
    Rng rng(7001);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.next_unit() * 2.0 - 1.0;
        const double b = rng.next_unit() * 2.0 - 1.0;
        const double c = rng.next_unit() * 2.0 - 1.0;
        CHECK(total_effect({a, b, c}) == total_effect({b, a, c}));
    }
}

TEST_CASE("ci_excludes_zero requires the whole interval on one side") {
    CHECK(ci_excludes_zero({0.1, 0.5, CiMethod::PER, 0.05}));
    CHECK_FALSE(ci_excludes_zero({-0.1, 0.2, CiMethod::PER, 0.05}));
    CHECK(ci_excludes_zero({-0.5, -0.1, CiMethod::PER, 0.05}));
}

TEST_CASE("an endpoint exactly at zero counts as overlap") {
    CHECK_FALSE(ci_excludes_zero({0.0, 0.7, CiMethod::BC, 0.05}));
    CHECK_FALSE(ci_excludes_zero({0.0, 0.0, CiMethod::BC, 0.05}));
    CHECK_FALSE(ci_excludes_zero({-0.3, 0.0, CiMethod::BC, 0.05}));
}

TEST_CASE("path and method names round-trip") {
    for (Path p : kAllPaths) CHECK(path_from_string(to_string(p)) == p);
    for (CiMethod m : kAllMethods) CHECK(method_from_string(to_string(m)) == m);
    CHECK(std::string(to_string(Path::CPrime)) == "c_prime");
    CHECK(std::string(to_string(Path::CTotal)) == "c");
    CHECK(std::string(to_string(Path::AB)) == "ab");
    CHECK_THROWS_AS(path_from_string("abc"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_string("per"), std::invalid_argument);
}

TEST_CASE("MethodSet parses comma lists into canonical order") {
    const MethodSet s = MethodSet::parse("BC,PER");
    CHECK(s.contains(CiMethod::PER));
    CHECK(s.contains(CiMethod::BC));
    CHECK_FALSE(s.contains(CiMethod::BCA));
    CHECK(s.str() == "PER,BC");

    CHECK(MethodSet::parse("PER,BC,BCA") == MethodSet::all());
    CHECK(MethodSet::parse("BCA").methods() == std::vector<CiMethod>{CiMethod::BCA});

    CHECK_THROWS_AS(MethodSet::parse(""), ConfigInvalid);
    CHECK_THROWS_AS(MethodSet::parse("PER,XXX"), ConfigInvalid);
}

TEST_CASE("scenario validation rejects out-of-contract fields") {
    Scenario s;
    s.weights = {0.3, 0.3, 0.0};
    s.n = 50;
    s.resamples = 100;
    s.repeats = 10;
    s.alpha = 0.05;
    CHECK_NOTHROW(validate(s));

    Scenario bad = s;
    bad.n = 3;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = s;
    bad.resamples = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = s;
    bad.repeats = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = s;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = s;
    bad.alpha = 1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("PowerResult reports power as count over completed repeats") {
    PowerResult r;
    r.scenario_id = 3;
    r.methods = MethodSet::all();
    r.repeats_completed = 8;
    r.significant[static_cast<int>(CiMethod::BC)][static_cast<int>(Path::AB)] = 6;
    CHECK(r.count(CiMethod::BC, Path::AB) == 6);
    CHECK(r.power(CiMethod::BC, Path::AB) == doctest::Approx(0.75));
    CHECK(r.power(CiMethod::PER, Path::A) == 0.0);
}
