#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gmfdfa {

enum class TransformKind {
    raw,
    increments,
    abs_increments,
    squared_increments,
    returns,
    abs_returns,
    moving_mean_absreturn,
    moving_stddev,
};

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

// Window length, in samples, for the moving-volatility transforms.
struct VolatilityWindow {
    int s = 21;
};

// Ordered real-valued samples plus a tag recording the last transform applied.
class TimeSeries {
public:
    TimeSeries(std::vector<double> values, TransformKind label, std::string source_id);

    const std::vector<double>& values() const noexcept { return values_; }
    TransformKind label() const noexcept { return label_; }
    const std::string& source_id() const noexcept { return source_id_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    std::vector<double> values_;
    TransformKind label_;
    std::string source_id_;
};

// First differences x_{i+1} - x_i; output is one sample shorter.
TimeSeries increments(const TimeSeries& x);

// Logarithmic returns ln(x_{i+1}/x_i); requires strictly positive values.
TimeSeries log_returns(const TimeSeries& x);

// Derives one of the nonlinear transforms from a raw series: absolute or
// squared increments, absolute returns, or the two moving volatilities
// (windowed mean absolute return and windowed return standard deviation).
// The window is required for the two moving kinds and ignored otherwise.
TimeSeries transform(const TimeSeries& x, TransformKind kind,
                     std::optional<VolatilityWindow> window = {});

// Applies only the pointwise/windowed stage of a transform to a series that
// is already in increment or return space. Surrogate replicas go through
// this so the randomization happens before the nonlinearity.
TimeSeries nonlinearity(const TimeSeries& base, TransformKind kind,
                        std::optional<VolatilityWindow> window = {});

// Moving mean of |values| over full windows of length s; output length
// shrinks to size - s + 1.
TimeSeries moving_mean_abs(const TimeSeries& x, VolatilityWindow window);

// Moving population standard deviation over full windows of length s.
TimeSeries moving_stddev(const TimeSeries& x, VolatilityWindow window);

}
