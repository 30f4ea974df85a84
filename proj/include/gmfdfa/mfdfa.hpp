#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmfdfa/series.hpp"

namespace gmfdfa {

// Symmetric moment-order grid {-Q, -Q+step, ..., Q}. Always contains -Q, 0,
// 2 and Q, each exactly once.
struct QGrid {
    double Q = 15.0;
    double step = 0.25;
    std::vector<double> values;

    static QGrid make(double Q, double step);

    std::size_t size() const noexcept { return values.size(); }
    std::size_t index_of(double q) const;
};

bool same_grid(const QGrid& a, const QGrid& b);

// Strictly increasing window sizes, in samples.
struct TauGrid {
    std::vector<int> values;

    // Approximately n_points log-spaced integers in [tau_min, tau_max];
    // duplicates from rounding are merged.
    static TauGrid log_spaced(int tau_min, int tau_max, int n_points = 20);

    // Default grid for a series of the given length: log-spaced over
    // [max(10, poly_order + 2), length / 4].
    static TauGrid default_for(std::size_t series_length, int poly_order, int n_points = 20);
};

struct DetrendConfig {
    int poly_order = 2;
    bool integrate_profile = true;
};

// Inclusive window-size range used when fitting scaling exponents.
struct FitRange {
    int tau_min = 0;
    int tau_max = 0;
};

// F(q, tau) over a q-grid and a tau-grid with per-cell validity flags.
// A cell is invalid when its moment is undefined (for example too many
// exactly-detrended windows under q <= 0).
struct FluctuationGrid {
    QGrid q_grid;
    TauGrid tau_grid;
    std::vector<double> F;
    std::vector<std::uint8_t> valid;

    std::size_t index(std::size_t qi, std::size_t ti) const noexcept {
        return qi * tau_grid.values.size() + ti;
    }
    double value(std::size_t qi, std::size_t ti) const noexcept { return F[index(qi, ti)]; }
    bool is_valid(std::size_t qi, std::size_t ti) const noexcept {
        return valid[index(qi, ti)] != 0;
    }
    FitRange full_range() const noexcept {
        return {tau_grid.values.front(), tau_grid.values.back()};
    }
};

// Fitted generalized Hurst exponent h(q) per grid point with the standard
// error of the fitted slope.
struct HurstProfile {
    QGrid q_grid;
    std::vector<double> h;
    std::vector<double> std_error;
    FitRange fit_tau_range;

    double at(double q) const;
    double std_error_at(double q) const;
};

// Fraction of exactly-detrended windows above which a q <= 0 moment is
// marked invalid instead of being computed on the surviving windows.
inline constexpr double max_zero_variance_fraction = 0.10;

// Mean squared detrending residual per window at window size tau: the series
// (optionally replaced by the cumulative sum of its mean-subtracted values)
// is split into N = floor(L / tau) windows from the start and N from the
// end, and a least-squares polynomial of order cfg.poly_order is removed in
// each. Returns 2N values, forward windows first.
std::vector<double> segment_variances(const TimeSeries& x, int tau, const DetrendConfig& cfg);

// q-order moment of the window variances:
//   q != 0:  F = { (1/D) sum (variance)^(q/2) }^(1/q)
//   q  = 0:  F = exp{ (1/2D) sum ln(variance) }
// Exactly-zero variances contribute nothing for q > 0 (D stays the window
// count); for q <= 0 they are excluded and D becomes the count of positive
// entries, since a single zero would annihilate every negative moment.
double fluctuation(std::span<const double> variances, double q);

// Fills F(q, tau) for the full grid. Cells whose moment is undefined are
// flagged invalid; the call fails only if an entire tau row is invalid.
FluctuationGrid fluctuation_grid(const TimeSeries& x, const QGrid& q_grid,
                                 const TauGrid& tau_grid, const DetrendConfig& cfg);

// Per q, ordinary least squares of ln F(q, tau) on ln tau over valid cells
// with tau inside fit_range. Needs at least 4 points per q.
HurstProfile fit_profile(const FluctuationGrid& grid, FitRange fit_range);

// F~(q, tau) = F(q, tau) / F(2, tau) for q <= 2 and the reciprocal for
// q > 2, so every entry is a ratio against the plain variance scale.
FluctuationGrid normalized_fluctuation(const FluctuationGrid& grid);

// Scaling exponent of the geometric mean of F~^2(q, tau) over the q-grid
// (trapezoid-weighted so the discrete mean converges to the q-average):
// the slope of its log against ln tau.
double gmfdfa_exponent(const FluctuationGrid& grid, FitRange fit_range);

// Slope of ln[F(-Q, tau) / F(Q, tau)] against ln tau.
double ratio_exponent(const FluctuationGrid& grid, double Q, FitRange fit_range);

}
