#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmfdfa/bias.hpp"
#include "gmfdfa/cascade.hpp"
#include "gmfdfa/csv.hpp"
#include "gmfdfa/measures.hpp"
#include "gmfdfa/mfdfa.hpp"
#include "gmfdfa/series.hpp"

namespace gmfdfa {

// One run of the full pipeline: data source, transform list, analysis grids
// and the surrogate setup. Exactly one of input_path / cascade must be set.
// All randomness derives from the single master seed (a cascade source's own
// seed field is ignored here).
struct AnalysisConfig {
    std::string input_path;
    CsvSpec csv;
    std::optional<CascadeParams> cascade;

    std::vector<TransformKind> transforms;
    double Q = 15.0;
    double q_step = 0.25;
    int tau_points = 20;
    std::optional<int> tau_min;
    std::optional<int> tau_max;
    DetrendConfig detrend;
    SurrogateMethod surrogate = SurrogateMethod::shuffle;
    int n_replicas = 39;
    double confidence = 0.95;
    VolatilityWindow window;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
};

// The six transforms reported by default: increments, their absolute value
// and square, absolute returns, and the two moving volatilities.
std::vector<TransformKind> default_transforms();

void validate(const AnalysisConfig& cfg);

struct TransformResult {
    TransformKind kind;
    std::size_t analyzed_length = 0;
    HurstProfile profile;
    BiasRibbon ribbon;
    MultifractalReport report;
};

// wall_seconds is rendering metadata only; the canonical serialization
// (render_json, the tsv files) never contains it, so identical config and
// seed give byte-identical canonical outputs.
struct ReportBundle {
    std::string version;
    AnalysisConfig config;
    std::vector<TransformResult> results;
    double wall_seconds = 0.0;
};

ReportBundle run_analysis(const AnalysisConfig& cfg);

// Canonical machine-readable report (content of report.json).
std::string render_json(const ReportBundle& bundle);

// Human-readable table (content of report.txt); undefined values print as
// the literal token "x".
std::string render_text(const ReportBundle& bundle);

// Writes report.json, report.txt and one profile_<kind>.tsv per transform
// (columns q, h, std_error, ribbon_lower, ribbon_upper). Returns the paths
// written.
std::vector<std::string> emit_outputs(const ReportBundle& bundle, const std::string& dir);

// Cascade parameter sweep: per a, the median fitted spread and integral
// measure over n_seeds independent cascades, next to the closed-form spread.
struct SweepConfig {
    double a_min = 0.51;
    double a_max = 0.95;
    double a_step = 0.01;
    int depth = 16;
    int n_seeds = 10;
    double Q = 15.0;
    double q_step = 0.25;
    int tau_points = 20;
    DetrendConfig detrend;
    std::uint64_t seed = 0;
};

struct SweepPoint {
    double a = 0.0;
    double delta_h_th = 0.0;
    double delta_h_obs = 0.0;
    double delta_h2 = 0.0;
};

std::vector<SweepPoint> run_sweep(const SweepConfig& cfg);

std::string render_sweep_tsv(const std::vector<SweepPoint>& points);

// Writes sweep.tsv into dir and returns its path.
std::string emit_sweep(const std::vector<SweepPoint>& points, const std::string& dir);

}
