#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmfdfa/mfdfa.hpp"

namespace gmfdfa {

// Per-q lower/upper envelope of generalized Hurst exponents attributable to
// finite size and transform effects, at a stated confidence level.
struct BiasRibbon {
    QGrid q_grid;
    std::vector<double> lower;
    std::vector<double> upper;
    double confidence = 0.95;

    double lower_at(double q) const;
    double upper_at(double q) const;
};

// Diagnostic flags attached to a report. The two *_below/above flags mark
// the edge configurations in which the unbiased spread is undefined; the
// *_in_ribbon flags mark edges swallowed by the ribbon, where the matching
// edge increment is taken as zero.
struct ReportFlags {
    bool inverted_edges = false;
    bool lower_edge_below_ribbon = false;
    bool upper_edge_above_ribbon = false;
    bool lower_edge_in_ribbon = false;
    bool upper_edge_in_ribbon = false;
    bool fully_biased = false;
    bool ribbon_understated = false;

    std::vector<std::string> active_names() const;
};

// Edge decomposition of the observed spread into a ribbon part and an
// unbiased remainder. delta_h_unb is empty in the undefined edge
// configurations (rendered as "x" in reports).
struct Decomposition {
    double delta_h_obs = 0.0;
    double delta_h_b = 0.0;
    std::optional<double> delta_h_unb;
    ReportFlags flags;
};

// The four spread measures for one analyzed series.
struct MultifractalReport {
    double delta_h_obs = 0.0;
    double delta_h_b = 0.0;
    std::optional<double> delta_h_unb;
    double delta_h2 = 0.0;
    double delta_h = 0.0;
    ReportFlags flags;
};

// Classical spread h(-Q) - h(Q); negative when the edges are inverted.
double delta_h(const HurstProfile& profile, double Q);

// q-averaged absolute deviation from h(2):
// (1/Q) * trapezoidal integral over [-Q, Q] of |h(q) - h(2)|.
double delta_h2(const HurstProfile& profile, double Q);

// Distance of the observed exponent from the ribbon at one q: zero inside
// the ribbon (boundaries included), the overshoot otherwise.
double distance(const HurstProfile& profile, const BiasRibbon& ribbon, double q);

// q-averaged ribbon distance: (1/Q) * trapezoidal integral of distance(q)
// over [-Q, Q]. Zero exactly when the profile lies inside the ribbon.
double delta_h_bias_aware(const HurstProfile& profile, const BiasRibbon& ribbon, double Q);

// Splits delta_h_obs into the ribbon width upper(-Q) - lower(Q) and the
// unbiased edge increments max(h(-Q) - upper(-Q), 0) + max(lower(Q) - h(Q), 0).
// When an edge falls on the wrong side of the ribbon the unbiased part is
// undefined and the corresponding flag is set.
Decomposition decompose(const HurstProfile& profile, const BiasRibbon& ribbon, double Q);

// Assembles all four measures and their flags for one profile/ribbon pair.
MultifractalReport build_report(const HurstProfile& profile, const BiasRibbon& ribbon, double Q);

}
