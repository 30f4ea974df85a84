#include "gmfdfa/mfdfa.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

namespace {

std::string fmt(double v) {
    std::string s = std::to_string(v);
    return s;
}

}

QGrid QGrid::make(double Q, double step) {
    if (!(Q > 0.0) || !(step > 0.0)) {
        throw InvalidParameter("q grid needs Q > 0 and step > 0");
    }
    if (Q < 2.0) {
        throw InvalidParameter("q grid must reach 2, got Q = " + fmt(Q));
    }
    const double k_real = Q / step;
    const long long K = std::llround(k_real);
    if (std::fabs(k_real - static_cast<double>(K)) > 1e-9) {
        throw InvalidParameter("Q = " + fmt(Q) + " is not a multiple of step = " + fmt(step));
    }
    const double two_real = 2.0 / step;
    if (std::fabs(two_real - std::llround(two_real)) > 1e-9) {
        throw InvalidParameter("q grid with step = " + fmt(step) + " misses q = 2");
    }
    QGrid grid;
    grid.Q = Q;
    grid.step = step;
    grid.values.resize(static_cast<std::size_t>(2 * K + 1));
    for (long long i = 0; i <= 2 * K; ++i) {
        grid.values[static_cast<std::size_t>(i)] = static_cast<double>(i - K) * step;
    }
    return grid;
}

std::size_t QGrid::index_of(double q) const {
    const long long K = (static_cast<long long>(values.size()) - 1) / 2;
    const long long i = std::llround(q / step) + K;
    if (i < 0 || i >= static_cast<long long>(values.size()) ||
        std::fabs(values[static_cast<std::size_t>(i)] - q) > 1e-9) {
        throw QNotOnGrid("q = " + fmt(q) + " is not on the grid (Q = " + fmt(Q) +
                         ", step = " + fmt(step) + ")");
    }
    return static_cast<std::size_t>(i);
}

bool same_grid(const QGrid& a, const QGrid& b) {
    return a.Q == b.Q && a.step == b.step && a.values.size() == b.values.size();
}

TauGrid TauGrid::log_spaced(int tau_min, int tau_max, int n_points) {
    if (tau_min < 2 || tau_max < tau_min) {
        throw InvalidParameter("tau grid needs 2 <= tau_min <= tau_max, got [" +
                               std::to_string(tau_min) + ", " + std::to_string(tau_max) + "]");
    }
    if (n_points < 2) {
        throw InvalidParameter("tau grid needs at least 2 points");
    }
    const double lo = std::log(static_cast<double>(tau_min));
    const double hi = std::log(static_cast<double>(tau_max));
    TauGrid grid;
    grid.values.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (n_points - 1);
        const int tau = static_cast<int>(std::llround(std::exp(t)));
        if (grid.values.empty() || tau > grid.values.back()) {
            grid.values.push_back(tau);
        }
    }
    return grid;
}

TauGrid TauGrid::default_for(std::size_t series_length, int poly_order, int n_points) {
    const int tau_min = std::max(10, poly_order + 2);
    const int tau_max = static_cast<int>(series_length / 4);
    if (tau_max < tau_min) {
        throw SeriesTooShort("series of " + std::to_string(series_length) +
                             " samples is too short for a tau grid starting at " +
                             std::to_string(tau_min));
    }
    return log_spaced(tau_min, tau_max, n_points);
}

double HurstProfile::at(double q) const {
    return h[q_grid.index_of(q)];
}

double HurstProfile::std_error_at(double q) const {
    return std_error[q_grid.index_of(q)];
}

namespace {

// Solves G c = r in place for a symmetric positive definite G of size d.
void cholesky_solve(std::vector<long double>& G, std::vector<long double>& r, int d) {
    for (int j = 0; j < d; ++j) {
        long double diag = G[static_cast<std::size_t>(j * d + j)];
        for (int k = 0; k < j; ++k) {
            const long double v = G[static_cast<std::size_t>(j * d + k)];
            diag -= v * v;
        }
        diag = std::sqrt(diag);
        G[static_cast<std::size_t>(j * d + j)] = diag;
        for (int i = j + 1; i < d; ++i) {
            long double v = G[static_cast<std::size_t>(i * d + j)];
            for (int k = 0; k < j; ++k) {
                v -= G[static_cast<std::size_t>(i * d + k)] * G[static_cast<std::size_t>(j * d + k)];
            }
            G[static_cast<std::size_t>(i * d + j)] = v / diag;
        }
    }
    for (int i = 0; i < d; ++i) {
        long double v = r[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) {
            v -= G[static_cast<std::size_t>(i * d + k)] * r[static_cast<std::size_t>(k)];
        }
        r[static_cast<std::size_t>(i)] = v / G[static_cast<std::size_t>(i * d + i)];
    }
    for (int i = d - 1; i >= 0; --i) {
        long double v = r[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < d; ++k) {
            v -= G[static_cast<std::size_t>(k * d + i)] * r[static_cast<std::size_t>(k)];
        }
        r[static_cast<std::size_t>(i)] = v / G[static_cast<std::size_t>(i * d + i)];
    }
}

// Chebyshev polynomial values on tau points mapped to [-1, 1], one row per
// order. Chebyshev instead of raw monomials keeps the normal equations well
// conditioned up to the supported orders.
std::vector<std::vector<long double>> chebyshev_basis(int tau, int order) {
    std::vector<std::vector<long double>> basis(static_cast<std::size_t>(order + 1),
                                                std::vector<long double>(static_cast<std::size_t>(tau)));
    for (int j = 0; j < tau; ++j) {
        const long double t =
            tau == 1 ? 0.0L : -1.0L + 2.0L * static_cast<long double>(j) / (tau - 1);
        basis[0][static_cast<std::size_t>(j)] = 1.0L;
        if (order >= 1) basis[1][static_cast<std::size_t>(j)] = t;
        for (int p = 2; p <= order; ++p) {
            basis[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] =
                2.0L * t * basis[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(j)] -
                basis[static_cast<std::size_t>(p - 2)][static_cast<std::size_t>(j)];
        }
    }
    return basis;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    std::size_t n = 0;
};

OlsFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ssr = std::max(syy - fit.slope * sxy, 0.0);
    if (n > 2) {
        fit.slope_std_error = std::sqrt(ssr / (static_cast<double>(n - 2) * sxx));
    }
    return fit;
}

// Internal moment kernel over precomputed logs of the positive variances.
// n_total is the full window count including exact zeros. The max shift
// keeps every exponential in [0, 1], so double precision suffices.
double moment_from_logs(std::span<const double> logs, std::size_t n_total, double q) {
    const std::size_t p = logs.size();
    if (q == 0.0) {
        double sum = 0.0;
        for (const double l : logs) sum += l;
        return std::exp(sum / (2.0 * static_cast<double>(p)));
    }
    const double half_q = q / 2.0;
    double m = half_q * logs[0];
    for (const double l : logs) m = std::max(m, half_q * l);
    double sum = 0.0;
    for (const double l : logs) sum += std::exp(half_q * l - m);
    const std::size_t denom = q > 0.0 ? n_total : p;
    const double log_f = (m + std::log(sum) - std::log(static_cast<double>(denom))) / q;
    return std::exp(log_f);
}

}

std::vector<double> segment_variances(const TimeSeries& x, int tau, const DetrendConfig& cfg) {
    if (cfg.poly_order < 0) {
        throw InvalidParameter("detrend order must be nonnegative, got " +
                               std::to_string(cfg.poly_order));
    }
    if (tau < cfg.poly_order + 2) {
        throw WindowTooSmall("tau = " + std::to_string(tau) + " cannot support a polynomial of order " +
                             std::to_string(cfg.poly_order));
    }
    const std::size_t L = x.size();
    if (L < 2 * static_cast<std::size_t>(tau)) {
        throw SeriesTooShort("series of " + std::to_string(L) +
                             " samples is shorter than two windows of tau = " + std::to_string(tau));
    }

    // Profile in extended precision: window residuals can sit many orders of
    // magnitude below the profile values they are differences of.
    std::vector<long double> y(L);
    if (cfg.integrate_profile) {
        long double mean = 0.0L;
        for (std::size_t i = 0; i < L; ++i) mean += static_cast<long double>(x[i]);
        mean /= static_cast<long double>(L);
        long double run = 0.0L;
        for (std::size_t i = 0; i < L; ++i) {
            run += static_cast<long double>(x[i]) - mean;
            y[i] = run;
        }
    } else {
        for (std::size_t i = 0; i < L; ++i) y[i] = static_cast<long double>(x[i]);
    }

    const int d = cfg.poly_order + 1;
    const auto basis = chebyshev_basis(tau, cfg.poly_order);
    std::vector<long double> gram(static_cast<std::size_t>(d * d), 0.0L);
    for (int p = 0; p < d; ++p) {
        for (int r = 0; r <= p; ++r) {
            long double dot = 0.0L;
            for (int j = 0; j < tau; ++j) {
                dot += basis[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] *
                       basis[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
            }
            gram[static_cast<std::size_t>(p * d + r)] = dot;
            gram[static_cast<std::size_t>(r * d + p)] = dot;
        }
    }

    const std::size_t N = L / static_cast<std::size_t>(tau);
    std::vector<double> variances(2 * N);
    std::vector<long double> z(static_cast<std::size_t>(tau));
    std::vector<long double> coef(static_cast<std::size_t>(d));
    std::vector<long double> chol(gram.size());

    auto window_variance = [&](std::size_t start) -> double {
        const long double offset = y[start];
        long double max_abs = std::fabs(offset);
        for (int j = 0; j < tau; ++j) {
            const long double v = y[start + static_cast<std::size_t>(j)];
            max_abs = std::max(max_abs, std::fabs(v));
            z[static_cast<std::size_t>(j)] = v - offset;
        }
        for (int p = 0; p < d; ++p) {
            long double dot = 0.0L;
            for (int j = 0; j < tau; ++j) {
                dot += basis[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] *
                       z[static_cast<std::size_t>(j)];
            }
            coef[static_cast<std::size_t>(p)] = dot;
        }
        chol = gram;
        cholesky_solve(chol, coef, d);
        long double ss = 0.0L;
        for (int j = 0; j < tau; ++j) {
            long double resid = z[static_cast<std::size_t>(j)];
            for (int p = 0; p < d; ++p) {
                resid -= coef[static_cast<std::size_t>(p)] *
                         basis[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
            }
            ss += resid * resid;
        }
        const long double variance = ss / static_cast<long double>(tau);
        // Residuals at the rounding floor of the fit are exact detrending in
        // disguise; clamping them to zero keeps negative moments meaningful.
        const long double noise = 16.0L * LDBL_EPSILON * max_abs;
        if (variance <= noise * noise) return 0.0;
        return static_cast<double>(variance);
    };

    for (std::size_t k = 0; k < N; ++k) {
        variances[k] = window_variance(k * static_cast<std::size_t>(tau));
    }
    for (std::size_t k = 0; k < N; ++k) {
        variances[N + k] = window_variance(L - (k + 1) * static_cast<std::size_t>(tau));
    }
    return variances;
}

double fluctuation(std::span<const double> variances, double q) {
    if (variances.empty()) {
        throw AllZeroVariances("no window variances given");
    }
    std::vector<double> logs;
    logs.reserve(variances.size());
    for (const double v : variances) {
        if (v < 0.0) {
            throw NegativeVarianceInput("window variance " + fmt(v) + " is negative");
        }
        if (v > 0.0) logs.push_back(std::log(v));
    }
    if (logs.empty()) {
        throw AllZeroVariances("all window variances are zero");
    }
    return moment_from_logs(logs, variances.size(), q);
}

FluctuationGrid fluctuation_grid(const TimeSeries& x, const QGrid& q_grid,
                                 const TauGrid& tau_grid, const DetrendConfig& cfg) {
    if (q_grid.values.empty() || tau_grid.values.empty()) {
        throw InvalidParameter("empty analysis grid");
    }
    if (tau_grid.values.front() < cfg.poly_order + 2) {
        throw WindowTooSmall("smallest tau = " + std::to_string(tau_grid.values.front()) +
                             " cannot support detrend order " + std::to_string(cfg.poly_order));
    }
    if (static_cast<std::size_t>(tau_grid.values.back()) * 4 > x.size()) {
        throw SeriesTooShort("largest tau = " + std::to_string(tau_grid.values.back()) +
                             " exceeds a quarter of the series length " + std::to_string(x.size()));
    }

    FluctuationGrid grid;
    grid.q_grid = q_grid;
    grid.tau_grid = tau_grid;
    grid.F.assign(q_grid.size() * tau_grid.values.size(), 0.0);
    grid.valid.assign(grid.F.size(), 0);

    for (std::size_t ti = 0; ti < tau_grid.values.size(); ++ti) {
        const std::vector<double> variances = segment_variances(x, tau_grid.values[ti], cfg);
        std::vector<double> logs;
        logs.reserve(variances.size());
        for (const double v : variances) {
            if (v > 0.0) logs.push_back(std::log(v));
        }
        const double zero_fraction =
            static_cast<double>(variances.size() - logs.size()) / static_cast<double>(variances.size());
        bool any_valid = false;
        for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
            const double q = q_grid.values[qi];
            if (logs.empty()) continue;
            if (q <= 0.0 && zero_fraction > max_zero_variance_fraction) continue;
            const double f = moment_from_logs(logs, variances.size(), q);
            if (!std::isfinite(f) || f <= 0.0) continue;
            grid.F[grid.index(qi, ti)] = f;
            grid.valid[grid.index(qi, ti)] = 1;
            any_valid = true;
        }
        if (!any_valid) {
            throw AllZeroVariances("every moment at tau = " + std::to_string(tau_grid.values[ti]) +
                                   " is undefined");
        }
    }
    return grid;
}

HurstProfile fit_profile(const FluctuationGrid& grid, FitRange fit_range) {
    HurstProfile profile;
    profile.q_grid = grid.q_grid;
    profile.fit_tau_range = fit_range;
    profile.h.resize(grid.q_grid.size());
    profile.std_error.resize(grid.q_grid.size());

    std::vector<double> lx, ly;
    for (std::size_t qi = 0; qi < grid.q_grid.size(); ++qi) {
        lx.clear();
        ly.clear();
        for (std::size_t ti = 0; ti < grid.tau_grid.values.size(); ++ti) {
            const int tau = grid.tau_grid.values[ti];
            if (tau < fit_range.tau_min || tau > fit_range.tau_max) continue;
            if (!grid.is_valid(qi, ti)) continue;
            lx.push_back(std::log(static_cast<double>(tau)));
            ly.push_back(std::log(grid.value(qi, ti)));
        }
        if (lx.size() < 4) {
            throw InsufficientFitPoints(grid.q_grid.values[qi],
                                        "only " + std::to_string(lx.size()) +
                                            " valid tau points at q = " + fmt(grid.q_grid.values[qi]) +
                                            ", need at least 4");
        }
        const OlsFit fit = fit_line(lx, ly);
        profile.h[qi] = fit.slope;
        profile.std_error[qi] = fit.slope_std_error;
    }
    return profile;
}

FluctuationGrid normalized_fluctuation(const FluctuationGrid& grid) {
    const std::size_t q2 = grid.q_grid.index_of(2.0);
    FluctuationGrid out = grid;
    for (std::size_t ti = 0; ti < grid.tau_grid.values.size(); ++ti) {
        if (!grid.is_valid(q2, ti)) {
            throw MissingVarianceColumn("F(2, tau = " +
                                        std::to_string(grid.tau_grid.values[ti]) +
                                        ") is invalid; cannot normalize");
        }
        const double sigma = grid.value(q2, ti);
        for (std::size_t qi = 0; qi < grid.q_grid.size(); ++qi) {
            if (!grid.is_valid(qi, ti)) continue;
            const double f = grid.value(qi, ti);
            out.F[out.index(qi, ti)] = grid.q_grid.values[qi] <= 2.0 ? f / sigma : sigma / f;
        }
    }
    return out;
}

double gmfdfa_exponent(const FluctuationGrid& grid, FitRange fit_range) {
    const FluctuationGrid normalized = normalized_fluctuation(grid);
    const std::size_t nq = grid.q_grid.size();
    // Trapezoid weights over the q grid, normalized to sum to one, so the
    // discrete geometric mean matches the integral q-average.
    std::vector<double> w(nq, grid.q_grid.step);
    w.front() *= 0.5;
    w.back() *= 0.5;
    const double total = 2.0 * grid.q_grid.Q;
    for (double& wi : w) wi /= total;

    std::vector<double> lx, ly;
    for (std::size_t ti = 0; ti < grid.tau_grid.values.size(); ++ti) {
        const int tau = grid.tau_grid.values[ti];
        if (tau < fit_range.tau_min || tau > fit_range.tau_max) continue;
        bool all_valid = true;
        double log_mean = 0.0;
        for (std::size_t qi = 0; qi < nq; ++qi) {
            if (!normalized.is_valid(qi, ti)) {
                all_valid = false;
                break;
            }
            log_mean += w[qi] * 2.0 * std::log(normalized.value(qi, ti));
        }
        if (!all_valid) continue;
        lx.push_back(std::log(static_cast<double>(tau)));
        ly.push_back(log_mean);
    }
    if (lx.size() < 4) {
        throw InsufficientFitPoints(std::numeric_limits<double>::quiet_NaN(),
                                    "only " + std::to_string(lx.size()) +
                                        " tau points with a full q column, need at least 4");
    }
    return fit_line(lx, ly).slope;
}

double ratio_exponent(const FluctuationGrid& grid, double Q, FitRange fit_range) {
    const std::size_t q_neg = grid.q_grid.index_of(-Q);
    const std::size_t q_pos = grid.q_grid.index_of(Q);
    std::vector<double> lx, ly;
    for (std::size_t ti = 0; ti < grid.tau_grid.values.size(); ++ti) {
        const int tau = grid.tau_grid.values[ti];
        if (tau < fit_range.tau_min || tau > fit_range.tau_max) continue;
        if (!grid.is_valid(q_neg, ti) || !grid.is_valid(q_pos, ti)) continue;
        lx.push_back(std::log(static_cast<double>(tau)));
        ly.push_back(std::log(grid.value(q_neg, ti)) - std::log(grid.value(q_pos, ti)));
    }
    if (lx.size() < 4) {
        throw InvalidEdgeColumn("only " + std::to_string(lx.size()) +
                                " tau points where both edge moments are valid, need at least 4");
    }
    return fit_line(lx, ly).slope;
}

}
