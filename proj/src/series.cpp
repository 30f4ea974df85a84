#include "gmfdfa/series.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::raw: return "raw";
        case TransformKind::increments: return "increments";
        case TransformKind::abs_increments: return "abs_increments";
        case TransformKind::squared_increments: return "squared_increments";
        case TransformKind::returns: return "returns";
        case TransformKind::abs_returns: return "abs_returns";
        case TransformKind::moving_mean_absreturn: return "moving_mean_absreturn";
        case TransformKind::moving_stddev: return "moving_stddev";
    }
    std::abort();
}

TransformKind transform_kind_from_string(const std::string& name) {
    if (name == "raw") return TransformKind::raw;
    if (name == "increments") return TransformKind::increments;
    if (name == "abs_increments") return TransformKind::abs_increments;
    if (name == "squared_increments") return TransformKind::squared_increments;
    if (name == "returns") return TransformKind::returns;
    if (name == "abs_returns") return TransformKind::abs_returns;
    if (name == "moving_mean_absreturn") return TransformKind::moving_mean_absreturn;
    if (name == "moving_stddev") return TransformKind::moving_stddev;
    throw InvalidParameter("unknown transform kind: " + name);
}

TimeSeries::TimeSeries(std::vector<double> values, TransformKind label, std::string source_id)
    : values_(std::move(values)), label_(label), source_id_(std::move(source_id)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw NonFiniteValue("non-finite value at index " + std::to_string(i) + " in series '" +
                                 source_id_ + "'");
        }
    }
}

namespace {

void require_length(const TimeSeries& x, std::size_t minimum) {
    if (x.size() < minimum) {
        throw SeriesTooShort("series '" + x.source_id() + "' has " + std::to_string(x.size()) +
                             " samples, need at least " + std::to_string(minimum));
    }
}

void require_window(const std::optional<VolatilityWindow>& window, const TimeSeries& x,
                    TransformKind kind) {
    if (!window) {
        throw MissingWindow("transform " + to_string(kind) + " requires a volatility window");
    }
    if (window->s < 2) {
        throw WindowTooSmall("volatility window s = " + std::to_string(window->s) +
                             ", need s >= 2");
    }
    if (static_cast<std::size_t>(window->s) >= x.size()) {
        throw WindowTooSmall("volatility window s = " + std::to_string(window->s) +
                             " does not fit a series of " + std::to_string(x.size()) + " samples");
    }
}

TimeSeries map_values(const TimeSeries& x, TransformKind label, double (*f)(double)) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
    return TimeSeries(std::move(out), label, x.source_id());
}

}

TimeSeries increments(const TimeSeries& x) {
    require_length(x, 2);
    std::vector<double> out(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) out[i] = x[i + 1] - x[i];
    return TimeSeries(std::move(out), TransformKind::increments, x.source_id());
}

TimeSeries log_returns(const TimeSeries& x) {
    require_length(x, 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0) {
            throw NonPositiveValue("log returns need strictly positive values; series '" +
                                   x.source_id() + "' has " + std::to_string(x[i]) + " at index " +
                                   std::to_string(i));
        }
    }
    std::vector<double> out(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) out[i] = std::log(x[i + 1] / x[i]);
    return TimeSeries(std::move(out), TransformKind::returns, x.source_id());
}

TimeSeries moving_mean_abs(const TimeSeries& x, VolatilityWindow window) {
    const std::size_t s = static_cast<std::size_t>(window.s);
    require_length(x, s + 1);
    std::vector<double> out(x.size() - s + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = i; k < i + s; ++k) sum += std::fabs(x[k]);
        out[i] = sum / static_cast<double>(s);
    }
    return TimeSeries(std::move(out), TransformKind::moving_mean_absreturn, x.source_id());
}

TimeSeries moving_stddev(const TimeSeries& x, VolatilityWindow window) {
    const std::size_t s = static_cast<std::size_t>(window.s);
    require_length(x, s + 1);
    std::vector<double> out(x.size() - s + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double mean = 0.0;
        for (std::size_t k = i; k < i + s; ++k) mean += x[k];
        mean /= static_cast<double>(s);
        double ss = 0.0;
        for (std::size_t k = i; k < i + s; ++k) {
            const double d = x[k] - mean;
            ss += d * d;
        }
        out[i] = std::sqrt(ss / static_cast<double>(s));
    }
    return TimeSeries(std::move(out), TransformKind::moving_stddev, x.source_id());
}

TimeSeries nonlinearity(const TimeSeries& base, TransformKind kind,
                        std::optional<VolatilityWindow> window) {
    switch (kind) {
        case TransformKind::increments:
        case TransformKind::returns:
            return TimeSeries(base.values(), kind, base.source_id());
        case TransformKind::abs_increments:
        case TransformKind::abs_returns:
            return map_values(base, kind, [](double v) { return std::fabs(v); });
        case TransformKind::squared_increments:
            return map_values(base, kind, [](double v) { return v * v; });
        case TransformKind::moving_mean_absreturn:
            require_window(window, base, kind);
            return moving_mean_abs(base, *window);
        case TransformKind::moving_stddev:
            require_window(window, base, kind);
            return moving_stddev(base, *window);
        case TransformKind::raw:
            break;
    }
    throw InvalidParameter("no nonlinearity stage for transform kind " + to_string(kind));
}

TimeSeries transform(const TimeSeries& x, TransformKind kind,
                     std::optional<VolatilityWindow> window) {
    switch (kind) {
        case TransformKind::increments:
        case TransformKind::abs_increments:
        case TransformKind::squared_increments:
            return nonlinearity(increments(x), kind);
        case TransformKind::returns:
        case TransformKind::abs_returns:
            return nonlinearity(log_returns(x), kind);
        case TransformKind::moving_mean_absreturn:
        case TransformKind::moving_stddev: {
            TimeSeries r = log_returns(x);
            require_window(window, r, kind);
            return nonlinearity(r, kind, window);
        }
        case TransformKind::raw:
            break;
    }
    throw InvalidParameter("transform kind " + to_string(kind) +
                           " is not derivable from a raw series");
}

}
