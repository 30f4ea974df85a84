#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gmfdfa/measures.hpp"
#include "gmfdfa/mfdfa.hpp"
#include "gmfdfa/series.hpp"

namespace gmfdfa {

enum class SurrogateMethod { shuffle, gaussian_matched };

std::string to_string(SurrogateMethod method);
SurrogateMethod surrogate_method_from_string(const std::string& name);

// Monte-Carlo setup for the bias ribbon. transform_kind names the
// nonlinearity applied to every surrogate after randomization, so the
// transform's own contribution to apparent multifractality lands inside
// the ribbon.
struct SurrogateConfig {
    int n_replicas = 39;
    SurrogateMethod method = SurrogateMethod::shuffle;
    TransformKind transform_kind = TransformKind::increments;
    std::optional<VolatilityWindow> window;
    double confidence = 0.95;
    std::uint64_t seed = 0;
};

// Analysis settings shared between the observed profile and every replica.
struct AnalysisParams {
    QGrid q_grid;
    TauGrid tau_grid;
    DetrendConfig detrend;
    FitRange fit_range;
};

// Counter-derived per-purpose seed: a pure function of (master, salt), so
// replicas can run in any order with identical results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt);

// shuffle: random permutation of the values (kills temporal structure,
// keeps the distribution). gaussian_matched: i.i.d. Gaussian draws with the
// sample mean and variance of x.
TimeSeries make_surrogate(const TimeSeries& x, SurrogateMethod method, std::uint64_t seed);

// Per-q envelope of generalized Hurst exponents across surrogate replicas
// of the base series. Each replica runs the full pipeline: surrogate, then
// the configured nonlinearity, then MFDFA with the given params. The
// envelope holds the empirical (1-c)/2 and (1+c)/2 order statistics of the
// replica deviations h(q) - h(2), re-anchored at the observed series' own
// h(2) (passed as center_h2, or recomputed from base when absent): the
// ribbon measures how much profile spread the null explains around the
// persistence level the data actually has.
BiasRibbon estimate_ribbon(const TimeSeries& base, const SurrogateConfig& cfg,
                           const AnalysisParams& params,
                           std::optional<double> center_h2 = {});

}
