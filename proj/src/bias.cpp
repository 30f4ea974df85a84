#include "gmfdfa/bias.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

std::string to_string(SurrogateMethod method) {
    return method == SurrogateMethod::shuffle ? "shuffle" : "gaussian_matched";
}

SurrogateMethod surrogate_method_from_string(const std::string& name) {
    if (name == "shuffle") return SurrogateMethod::shuffle;
    if (name == "gaussian_matched") return SurrogateMethod::gaussian_matched;
    throw InvalidParameter("unknown surrogate method: " + name);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t z = master + (salt + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

TimeSeries make_surrogate(const TimeSeries& x, SurrogateMethod method, std::uint64_t seed) {
    if (x.size() < 2) {
        throw SeriesTooShort("surrogate needs at least 2 samples, got " +
                             std::to_string(x.size()));
    }
    std::mt19937_64 rng(seed);
    std::vector<double> values(x.values());
    if (method == SurrogateMethod::shuffle) {
        std::shuffle(values.begin(), values.end(), rng);
    } else {
        double mean = 0.0;
        for (const double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double ss = 0.0;
        for (const double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        std::normal_distribution<double> normal(mean, sd);
        for (double& v : values) v = normal(rng);
    }
    return TimeSeries(std::move(values), x.label(), x.source_id() + "/surrogate");
}

namespace {

std::vector<double> profile_of(const TimeSeries& analyzed, const AnalysisParams& params) {
    const FluctuationGrid grid =
        fluctuation_grid(analyzed, params.q_grid, params.tau_grid, params.detrend);
    return fit_profile(grid, params.fit_range).h;
}

}

BiasRibbon estimate_ribbon(const TimeSeries& base, const SurrogateConfig& cfg,
                           const AnalysisParams& params, std::optional<double> center_h2) {
    if (cfg.n_replicas < 20) {
        throw InvalidParameter("surrogate envelope needs at least 20 replicas, got " +
                               std::to_string(cfg.n_replicas));
    }
    if (!(cfg.confidence > 0.5 && cfg.confidence < 1.0)) {
        throw InvalidParameter("surrogate confidence must lie in (0.5, 1)");
    }

    const std::size_t q2 = params.q_grid.index_of(2.0);
    double center = 0.0;
    if (center_h2) {
        center = *center_h2;
    } else {
        const std::vector<double> h =
            profile_of(nonlinearity(base, cfg.transform_kind, cfg.window), params);
        center = h[q2];
    }

    std::vector<std::vector<double>> deviations;
    deviations.reserve(static_cast<std::size_t>(cfg.n_replicas));
    int failures = 0;
    for (int r = 0; r < cfg.n_replicas; ++r) {
        try {
            const TimeSeries surrogate =
                make_surrogate(base, cfg.method, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            std::vector<double> h =
                profile_of(nonlinearity(surrogate, cfg.transform_kind, cfg.window), params);
            const double h2 = h[q2];
            for (double& v : h) v -= h2;
            deviations.push_back(std::move(h));
        } catch (const Error&) {
            ++failures;
        }
    }
    if (failures * 5 > cfg.n_replicas) {
        throw RibbonEstimationError(std::to_string(failures) + " of " +
                                    std::to_string(cfg.n_replicas) +
                                    " surrogate replicas failed to analyze");
    }

    const std::size_t n = deviations.size();
    const auto k = static_cast<std::size_t>(
        std::max(1.0, std::floor((1.0 - cfg.confidence) / 2.0 * static_cast<double>(n + 1))));

    BiasRibbon ribbon;
    ribbon.q_grid = params.q_grid;
    ribbon.confidence = cfg.confidence;
    ribbon.lower.resize(params.q_grid.size());
    ribbon.upper.resize(params.q_grid.size());
    std::vector<double> column(n);
    for (std::size_t qi = 0; qi < params.q_grid.size(); ++qi) {
        for (std::size_t r = 0; r < n; ++r) column[r] = deviations[r][qi];
        std::sort(column.begin(), column.end());
        ribbon.lower[qi] = center + column[k - 1];
        ribbon.upper[qi] = center + column[n - k];
    }
    return ribbon;
}

}
