#include "gmfdfa/measures.hpp"

#include <cmath>
#include <cstddef>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

namespace {

void require_aligned(const HurstProfile& profile, const BiasRibbon& ribbon) {
    if (!same_grid(profile.q_grid, ribbon.q_grid)) {
        throw GridMismatch("profile and ribbon use different q grids");
    }
    if (ribbon.lower.size() != ribbon.q_grid.size() ||
        ribbon.upper.size() != ribbon.q_grid.size()) {
        throw GridMismatch("ribbon envelopes do not cover the q grid");
    }
}

// Trapezoidal integral over the grid points of [-Q, Q], divided by Q.
double q_average(const QGrid& grid, double Q, const std::vector<double>& f,
                 std::size_t i_lo, std::size_t i_hi) {
    double integral = 0.0;
    for (std::size_t i = i_lo; i < i_hi; ++i) {
        integral += 0.5 * (f[i] + f[i + 1]) * grid.step;
    }
    return integral / Q;
}

double distance_at(const HurstProfile& profile, const BiasRibbon& ribbon, std::size_t qi) {
    const double h = profile.h[qi];
    if (h > ribbon.upper[qi]) return h - ribbon.upper[qi];
    if (h < ribbon.lower[qi]) return ribbon.lower[qi] - h;
    return 0.0;
}

}

double BiasRibbon::lower_at(double q) const { return lower[q_grid.index_of(q)]; }
double BiasRibbon::upper_at(double q) const { return upper[q_grid.index_of(q)]; }

std::vector<std::string> ReportFlags::active_names() const {
    std::vector<std::string> names;
    if (inverted_edges) names.push_back("inverted_edges");
    if (lower_edge_below_ribbon) names.push_back("lower_edge_below_ribbon");
    if (upper_edge_above_ribbon) names.push_back("upper_edge_above_ribbon");
    if (lower_edge_in_ribbon) names.push_back("lower_edge_in_ribbon");
    if (upper_edge_in_ribbon) names.push_back("upper_edge_in_ribbon");
    if (fully_biased) names.push_back("fully_biased");
    if (ribbon_understated) names.push_back("ribbon_understated");
    return names;
}

double delta_h(const HurstProfile& profile, double Q) {
    return profile.at(-Q) - profile.at(Q);
}

double delta_h2(const HurstProfile& profile, double Q) {
    const std::size_t i_lo = profile.q_grid.index_of(-Q);
    const std::size_t i_hi = profile.q_grid.index_of(Q);
    const double h2 = profile.h[profile.q_grid.index_of(2.0)];
    if (!std::isfinite(h2)) {
        throw MissingH2("h(2) is not finite");
    }
    std::vector<double> dev(profile.q_grid.size(), 0.0);
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        dev[i] = std::fabs(profile.h[i] - h2);
    }
    return q_average(profile.q_grid, Q, dev, i_lo, i_hi);
}

double distance(const HurstProfile& profile, const BiasRibbon& ribbon, double q) {
    require_aligned(profile, ribbon);
    return distance_at(profile, ribbon, profile.q_grid.index_of(q));
}

double delta_h_bias_aware(const HurstProfile& profile, const BiasRibbon& ribbon, double Q) {
    require_aligned(profile, ribbon);
    const std::size_t i_lo = profile.q_grid.index_of(-Q);
    const std::size_t i_hi = profile.q_grid.index_of(Q);
    std::vector<double> dist(profile.q_grid.size(), 0.0);
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        dist[i] = distance_at(profile, ribbon, i);
    }
    return q_average(profile.q_grid, Q, dist, i_lo, i_hi);
}

Decomposition decompose(const HurstProfile& profile, const BiasRibbon& ribbon, double Q) {
    require_aligned(profile, ribbon);
    const std::size_t i_neg = profile.q_grid.index_of(-Q);
    const std::size_t i_pos = profile.q_grid.index_of(Q);
    const double h_neg = profile.h[i_neg];
    const double h_pos = profile.h[i_pos];

    Decomposition d;
    d.delta_h_obs = h_neg - h_pos;
    d.delta_h_b = ribbon.upper[i_neg] - ribbon.lower[i_pos];
    d.flags.inverted_edges = d.delta_h_obs < 0.0;
    d.flags.lower_edge_below_ribbon = h_neg < ribbon.lower[i_neg];
    d.flags.upper_edge_above_ribbon = h_pos > ribbon.upper[i_pos];
    d.flags.lower_edge_in_ribbon =
        h_neg >= ribbon.lower[i_neg] && h_neg <= ribbon.upper[i_neg];
    d.flags.upper_edge_in_ribbon =
        h_pos >= ribbon.lower[i_pos] && h_pos <= ribbon.upper[i_pos];

    if (d.flags.lower_edge_below_ribbon || d.flags.upper_edge_above_ribbon) {
        return d;
    }
    d.delta_h_unb = std::max(h_neg - ribbon.upper[i_neg], 0.0) +
                    std::max(ribbon.lower[i_pos] - h_pos, 0.0);
    return d;
}

MultifractalReport build_report(const HurstProfile& profile, const BiasRibbon& ribbon, double Q) {
    const Decomposition d = decompose(profile, ribbon, Q);
    MultifractalReport report;
    report.delta_h_obs = d.delta_h_obs;
    report.delta_h_b = d.delta_h_b;
    report.delta_h_unb = d.delta_h_unb;
    report.delta_h2 = delta_h2(profile, Q);
    report.delta_h = delta_h_bias_aware(profile, ribbon, Q);
    report.flags = d.flags;
    report.flags.fully_biased = report.delta_h == 0.0;
    return report;
}

}
