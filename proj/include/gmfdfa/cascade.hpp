#pragma once

#include <cstdint>

#include "gmfdfa/series.hpp"

namespace gmfdfa {

// Binomial random cascade: depth n gives a series of length 2^n whose values
// are products of factors a and 1-a along the branching path.
struct CascadeParams {
    double a = 0.65;
    int depth = 16;
    std::uint64_t seed = 0;
};

// Generates a random cascade: at every split the pair {a, 1-a} is assigned
// to the two children in seeded random order. Values are positive and sum
// to 1 up to rounding.
TimeSeries generate(const CascadeParams& params);

// Deterministic variant with the factor a always on the left child. Intended
// for exactness checks; accepts any a in (0, 1) including the symmetric 0.5.
TimeSeries generate_left_heavy(double a, int depth);

// Closed-form generalized Hurst exponent of the binomial cascade:
// h(q) = (1/q)(1 - log2(a^q + (1-a)^q)) for q != 0 and the q -> 0 limit
// -(log2(a) + log2(1-a))/2 at q = 0.
double analytic_h(double a, double q);

// Closed-form spread h(-Q) - h(Q).
double analytic_spread(double a, double Q);

}
