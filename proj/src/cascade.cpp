#include "gmfdfa/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

namespace {

void require_a_open_unit(double a) {
    if (!(a > 0.0 && a < 1.0)) {
        throw InvalidParameter("cascade factor a = " + std::to_string(a) + ", need 0 < a < 1");
    }
}

std::vector<double> split_levels(double a, int depth, std::mt19937_64* rng) {
    std::vector<double> cells{1.0};
    std::uniform_int_distribution<int> coin(0, 1);
    for (int level = 0; level < depth; ++level) {
        std::vector<double> next(cells.size() * 2);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const bool a_left = rng == nullptr || coin(*rng) == 0;
            next[2 * i] = cells[i] * (a_left ? a : 1.0 - a);
            next[2 * i + 1] = cells[i] * (a_left ? 1.0 - a : a);
        }
        cells = std::move(next);
    }
    return cells;
}

}

TimeSeries generate(const CascadeParams& params) {
    if (!(params.a > 0.5 && params.a < 1.0)) {
        throw InvalidParameter("cascade factor a = " + std::to_string(params.a) +
                               ", need 0.5 < a < 1");
    }
    if (params.depth < 4) {
        throw InvalidParameter("cascade depth = " + std::to_string(params.depth) +
                               ", need depth >= 4");
    }
    std::mt19937_64 rng(params.seed);
    return TimeSeries(split_levels(params.a, params.depth, &rng), TransformKind::raw,
                      "cascade(a=" + std::to_string(params.a) +
                          ",depth=" + std::to_string(params.depth) + ")");
}

TimeSeries generate_left_heavy(double a, int depth) {
    require_a_open_unit(a);
    if (depth < 1) {
        throw InvalidParameter("cascade depth = " + std::to_string(depth) + ", need depth >= 1");
    }
    return TimeSeries(split_levels(a, depth, nullptr), TransformKind::raw,
                      "cascade_left_heavy(a=" + std::to_string(a) + ")");
}

double analytic_h(double a, double q) {
    require_a_open_unit(a);
    if (q == 0.0) {
        return -0.5 * (std::log2(a) + std::log2(1.0 - a));
    }
    // log2(a^q + (1-a)^q) evaluated in log space so large |q| cannot overflow.
    const double x1 = q * std::log(a);
    const double x2 = q * std::log(1.0 - a);
    const double hi = std::max(x1, x2);
    const double lo = std::min(x1, x2);
    const double log2_sum = (hi + std::log1p(std::exp(lo - hi))) / std::numbers::ln2;
    return (1.0 - log2_sum) / q;
}

double analytic_spread(double a, double Q) {
    if (!(Q > 0.0)) {
        throw InvalidParameter("spread needs Q > 0, got " + std::to_string(Q));
    }
    return analytic_h(a, -Q) - analytic_h(a, Q);
}

}
