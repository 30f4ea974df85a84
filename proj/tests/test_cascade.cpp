#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmfdfa/cascade.hpp"
#include "gmfdfa/errors.hpp"

using namespace gmfdfa;

TEST_CASE("symmetric cascade is exactly monofractal", "[cascade]") {
    // At a = 1/2 both branch factors coincide, so every moment scales the
    // same way: h(q) = 1 identically.
    for (const double q : {-15.0, -1.0, 0.0, 1.0, 2.0, 15.0}) {
        REQUIRE(analytic_h(0.5, q) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("analytic exponent matches high-precision reference values", "[cascade]") {
    // Frozen from a 30-digit evaluation of the closed form.
    REQUIRE(analytic_h(0.65, 2.0) == Catch::Approx(0.93783593249889915).margin(1e-12));
    REQUIRE(analytic_h(0.65, 0.0) == Catch::Approx(1.0680307747880142).margin(1e-12));
    REQUIRE(analytic_h(0.75, 2.0) == Catch::Approx(0.83903595255631883).margin(1e-12));
    REQUIRE(analytic_h(0.65, -15.0) == Catch::Approx(1.4479154265451512).margin(1e-12));
    REQUIRE(analytic_h(0.65, 15.0) == Catch::Approx(0.68814612303087728).margin(1e-12));
    REQUIRE(analytic_h(0.75, -15.0) == Catch::Approx(1.9333333400362596).margin(1e-12));
    REQUIRE(analytic_h(0.75, 15.0) == Catch::Approx(0.48170415924258419).margin(1e-12));
    REQUIRE(analytic_h(0.55, 2.0) == Catch::Approx(0.99282235351146497).margin(1e-12));
    REQUIRE(analytic_h(0.85, 2.0) == Catch::Approx(0.71234383465628159).margin(1e-12));
    REQUIRE(analytic_h(0.95, 2.0) == Catch::Approx(0.57200515134575973).margin(1e-12));
}

TEST_CASE("analytic exponent is continuous at q = 0", "[cascade]") {
    for (const double a : {0.55, 0.65, 0.85}) {
        const double at_zero = analytic_h(a, 0.0);
        REQUIRE(analytic_h(a, 1e-6) == Catch::Approx(at_zero).margin(1e-5));
        REQUIRE(analytic_h(a, -1e-6) == Catch::Approx(at_zero).margin(1e-5));
    }
}

TEST_CASE("analytic exponent decreases in q and stays within its limits", "[cascade]") {
    for (const double a : {0.55, 0.65, 0.75, 0.95}) {
        // h(q) runs from -log2(1-a) at q -> -inf down to -log2(a) at +inf.
        const double upper_limit = -std::log2(1.0 - a);
        const double lower_limit = -std::log2(a);
        double previous = upper_limit;
        for (double q = -50.0; q <= 50.0; q += 0.5) {
            const double h = analytic_h(a, q);
            REQUIRE(std::isfinite(h));
            REQUIRE(h <= previous + 1e-12);
            REQUIRE(h <= upper_limit + 1e-12);
            REQUIRE(h >= lower_limit - 1e-12);
            previous = h;
        }
        REQUIRE(analytic_h(a, -500.0) == Catch::Approx(upper_limit).margin(1e-2));
        REQUIRE(analytic_h(a, 500.0) == Catch::Approx(lower_limit).margin(1e-2));
    }
}

TEST_CASE("analytic spread matches reference values and grows with a", "[cascade]") {
    REQUIRE(analytic_spread(0.55, 15.0) == Catch::Approx(0.16542817372155566).margin(1e-12));
    REQUIRE(analytic_spread(0.65, 15.0) == Catch::Approx(0.75976930351427374).margin(1e-12));
    REQUIRE(analytic_spread(0.75, 15.0) == Catch::Approx(1.4516291807936754).margin(1e-12));
    REQUIRE(analytic_spread(0.85, 15.0) == Catch::Approx(2.3691670071968143).margin(1e-12));
    REQUIRE(analytic_spread(0.95, 15.0) == Catch::Approx(4.1145941801102524).margin(1e-12));

    double previous = 0.0;
    for (double a = 0.51; a < 0.99; a += 0.02) {
        const double spread = analytic_spread(a, 15.0);
        REQUIRE(spread > previous);
        previous = spread;
    }
    REQUIRE_THROWS_AS(analytic_spread(0.65, 0.0), InvalidParameter);
}

TEST_CASE("deterministic cascade splits exactly", "[cascade]") {
    SECTION("two levels at a = 0.75") {
        const TimeSeries c = generate_left_heavy(0.75, 2);
        REQUIRE(c.size() == 4);
        REQUIRE(c[0] == 0.5625);
        REQUIRE(c[1] == 0.1875);
        REQUIRE(c[2] == 0.1875);
        REQUIRE(c[3] == 0.0625);
    }
    SECTION("the symmetric limit is uniform") {
        const TimeSeries c = generate_left_heavy(0.5, 6);
        REQUIRE(c.size() == 64);
        for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(c[i] == 1.0 / 64.0);
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(generate_left_heavy(0.0, 3), InvalidParameter);
        REQUIRE_THROWS_AS(generate_left_heavy(1.0, 3), InvalidParameter);
        REQUIRE_THROWS_AS(generate_left_heavy(0.6, 0), InvalidParameter);
    }
}

TEST_CASE("random cascade invariants", "[cascade]") {
    CascadeParams params;
    params.a = 0.65;
    params.depth = 10;
    params.seed = 99;
    const TimeSeries c = generate(params);

    SECTION("length, positivity and unit mass") {
        REQUIRE(c.size() == 1024);
        double sum = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            REQUIRE(c[i] > 0.0);
            sum += c[i];
        }
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("seed reproducibility") {
        const TimeSeries again = generate(params);
        REQUIRE(again.values() == c.values());
        CascadeParams other = params;
        other.seed = 100;
        REQUIRE(generate(other).values() != c.values());
    }
    SECTION("value multiset is the deterministic cascade's multiset") {
        // Randomization only permutes which leaf receives which factor
        // path, and every leaf multiplies its factors top-down, so the
        // sorted values agree bit for bit.
        std::vector<double> random_sorted = c.values();
        std::vector<double> reference_sorted = generate_left_heavy(params.a, params.depth).values();
        std::sort(random_sorted.begin(), random_sorted.end());
        std::sort(reference_sorted.begin(), reference_sorted.end());
        REQUIRE(random_sorted == reference_sorted);
    }
}

TEST_CASE("random cascade parameter validation", "[cascade]") {
    CascadeParams params;
    params.a = 0.5;
    REQUIRE_THROWS_AS(generate(params), InvalidParameter);
    params.a = 1.0;
    REQUIRE_THROWS_AS(generate(params), InvalidParameter);
    params.a = 0.65;
    params.depth = 3;
    REQUIRE_THROWS_AS(generate(params), InvalidParameter);
}
