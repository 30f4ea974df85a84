#include "gmfdfa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gmfdfa/errors.hpp"
#include "gmfdfa/version.hpp"

namespace gmfdfa {

namespace {

constexpr std::uint64_t salt_cascade = 0x0C;
constexpr std::uint64_t salt_transform_base = 0x100;

bool is_returns_family(TransformKind kind) {
    switch (kind) {
        case TransformKind::returns:
        case TransformKind::abs_returns:
        case TransformKind::moving_mean_absreturn:
        case TransformKind::moving_stddev:
            return true;
        default:
            return false;
    }
}

bool is_moving(TransformKind kind) {
    return kind == TransformKind::moving_mean_absreturn ||
           kind == TransformKind::moving_stddev;
}

// A cascade series already plays the increment role; returns are taken
// against the cumulative level it deposits on, via log1p so increments many
// orders below the level keep their precision.
TimeSeries cascade_returns(const TimeSeries& cascade) {
    std::vector<double> r(cascade.size());
    long double level = 1.0L;
    for (std::size_t i = 0; i < cascade.size(); ++i) {
        r[i] = static_cast<double>(std::log1p(static_cast<long double>(cascade[i]) / level));
        level += static_cast<long double>(cascade[i]);
    }
    return TimeSeries(std::move(r), TransformKind::returns, cascade.source_id());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string format_fixed(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%10.4f", v);
    return buffer;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IOError("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw IOError("failed while writing " + path);
    }
}

}

std::vector<TransformKind> default_transforms() {
    return {TransformKind::increments,       TransformKind::abs_increments,
            TransformKind::squared_increments, TransformKind::abs_returns,
            TransformKind::moving_mean_absreturn, TransformKind::moving_stddev};
}

void validate(const AnalysisConfig& cfg) {
    const bool has_csv = !cfg.input_path.empty();
    const bool has_cascade = cfg.cascade.has_value();
    if (has_csv == has_cascade) {
        throw ConfigError("exactly one data source required: an input file or cascade parameters");
    }
    QGrid::make(cfg.Q, cfg.q_step);
    if (cfg.tau_points < 4) {
        throw ConfigError("tau grid needs at least 4 points for fitting, got " +
                          std::to_string(cfg.tau_points));
    }
    if (cfg.tau_min && *cfg.tau_min < 2) {
        throw ConfigError("tau_min must be at least 2");
    }
    if (cfg.tau_min && cfg.tau_max && *cfg.tau_max < *cfg.tau_min) {
        throw ConfigError("tau_max is smaller than tau_min");
    }
    if (cfg.detrend.poly_order < 0 || cfg.detrend.poly_order > 5) {
        throw ConfigError("detrend order must lie in [0, 5], got " +
                          std::to_string(cfg.detrend.poly_order));
    }
    if (cfg.n_replicas < 20) {
        throw ConfigError("surrogate envelope needs at least 20 replicas");
    }
    if (!(cfg.confidence > 0.5 && cfg.confidence < 1.0)) {
        throw ConfigError("confidence must lie in (0.5, 1)");
    }
    if (cfg.window.s < 2) {
        throw ConfigError("volatility window must be at least 2 samples");
    }
    for (const TransformKind kind : cfg.transforms) {
        if (kind == TransformKind::raw) {
            throw ConfigError("the raw series itself is not an analyzable transform");
        }
    }
}

ReportBundle run_analysis(const AnalysisConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    std::optional<TimeSeries> source;
    bool cascade_source = false;
    if (cfg.cascade) {
        CascadeParams params = *cfg.cascade;
        params.seed = derive_seed(cfg.seed, salt_cascade);
        source = generate(params);
        cascade_source = true;
    } else {
        source = ingest_csv(cfg.input_path, cfg.csv);
    }

    const std::vector<TransformKind> kinds =
        cfg.transforms.empty() ? default_transforms() : cfg.transforms;

    // Base series in increment/return space, shared across transforms.
    std::optional<TimeSeries> increment_base;
    std::optional<TimeSeries> return_base;
    auto base_for = [&](TransformKind kind) -> const TimeSeries& {
        if (is_returns_family(kind)) {
            if (!return_base) {
                return_base = cascade_source ? cascade_returns(*source) : log_returns(*source);
            }
            return *return_base;
        }
        if (!increment_base) {
            increment_base = cascade_source
                                 ? TimeSeries(source->values(), TransformKind::increments,
                                              source->source_id())
                                 : increments(*source);
        }
        return *increment_base;
    };

    ReportBundle bundle;
    bundle.version = version_string;
    bundle.config = cfg;

    const QGrid q_grid = QGrid::make(cfg.Q, cfg.q_step);
    for (const TransformKind kind : kinds) {
        const TimeSeries& base = base_for(kind);
        const std::optional<VolatilityWindow> window =
            is_moving(kind) ? std::optional<VolatilityWindow>(cfg.window) : std::nullopt;
        const TimeSeries analyzed = nonlinearity(base, kind, window);

        const int tau_lo = cfg.tau_min.value_or(std::max(10, cfg.detrend.poly_order + 2));
        const int tau_hi = cfg.tau_max.value_or(static_cast<int>(analyzed.size() / 4));
        const TauGrid tau_grid = TauGrid::log_spaced(tau_lo, tau_hi, cfg.tau_points);

        const FluctuationGrid grid = fluctuation_grid(analyzed, q_grid, tau_grid, cfg.detrend);
        const FitRange fit_range = grid.full_range();
        HurstProfile profile = fit_profile(grid, fit_range);

        SurrogateConfig surrogate;
        surrogate.n_replicas = cfg.n_replicas;
        surrogate.method = cfg.surrogate;
        surrogate.transform_kind = kind;
        surrogate.window = window;
        surrogate.confidence = cfg.confidence;
        surrogate.seed =
            derive_seed(cfg.seed, salt_transform_base + static_cast<std::uint64_t>(kind));
        const AnalysisParams params{q_grid, tau_grid, cfg.detrend, fit_range};
        BiasRibbon ribbon = estimate_ribbon(base, surrogate, params, profile.at(2.0));

        MultifractalReport report = build_report(profile, ribbon, cfg.Q);
        // A shuffle null pins the replica persistence at 1/2, so for strongly
        // persistent data the ribbon spread is a lower bound.
        report.flags.ribbon_understated =
            cfg.surrogate == SurrogateMethod::shuffle && profile.at(2.0) > 0.65;

        TransformResult result;
        result.kind = kind;
        result.analyzed_length = analyzed.size();
        result.profile = std::move(profile);
        result.ribbon = std::move(ribbon);
        result.report = report;
        bundle.results.push_back(std::move(result));
    }

    bundle.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

std::string render_json(const ReportBundle& bundle) {
    using json = nlohmann::ordered_json;
    json root;
    root["version"] = bundle.version;
    root["seed"] = bundle.config.seed;

    json config;
    if (bundle.config.cascade) {
        config["source"] = {{"kind", "cascade"},
                            {"a", bundle.config.cascade->a},
                            {"depth", bundle.config.cascade->depth}};
    } else {
        const char* header = bundle.config.csv.header == HeaderMode::automatic ? "auto"
                             : bundle.config.csv.header == HeaderMode::yes     ? "yes"
                                                                               : "no";
        config["source"] = {{"kind", "csv"},
                            {"path", bundle.config.input_path},
                            {"column", bundle.config.csv.column},
                            {"delimiter", std::string(1, bundle.config.csv.delimiter)},
                            {"header", header}};
    }
    json transforms = json::array();
    for (const TransformResult& r : bundle.results) transforms.push_back(to_string(r.kind));
    config["transforms"] = transforms;
    config["Q"] = bundle.config.Q;
    config["q_step"] = bundle.config.q_step;
    config["tau_points"] = bundle.config.tau_points;
    config["tau_min"] = bundle.config.tau_min ? json(*bundle.config.tau_min) : json(nullptr);
    config["tau_max"] = bundle.config.tau_max ? json(*bundle.config.tau_max) : json(nullptr);
    config["detrend_order"] = bundle.config.detrend.poly_order;
    config["integrate_profile"] = bundle.config.detrend.integrate_profile;
    config["surrogate"] = to_string(bundle.config.surrogate);
    config["n_replicas"] = bundle.config.n_replicas;
    config["confidence"] = bundle.config.confidence;
    config["volatility_window"] = bundle.config.window.s;
    root["config"] = config;

    json results = json::array();
    for (const TransformResult& r : bundle.results) {
        json entry;
        entry["transform"] = to_string(r.kind);
        entry["length"] = r.analyzed_length;
        entry["tau_range"] = {r.profile.fit_tau_range.tau_min, r.profile.fit_tau_range.tau_max};
        json measures;
        measures["delta_h_obs"] = r.report.delta_h_obs;
        measures["delta_h_b"] = r.report.delta_h_b;
        measures["delta_h_unb"] =
            r.report.delta_h_unb ? json(*r.report.delta_h_unb) : json("x");
        measures["delta_h2"] = r.report.delta_h2;
        measures["delta_h"] = r.report.delta_h;
        entry["measures"] = measures;
        entry["flags"] = r.report.flags.active_names();
        entry["profile"] = {{"q", r.profile.q_grid.values},
                            {"h", r.profile.h},
                            {"std_error", r.profile.std_error}};
        entry["ribbon"] = {{"confidence", r.ribbon.confidence},
                           {"lower", r.ribbon.lower},
                           {"upper", r.ribbon.upper}};
        results.push_back(entry);
    }
    root["results"] = results;
    return root.dump(2) + "\n";
}

std::string render_text(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "multifractal spread report (gmfdfa " << bundle.version << ")\n";
    if (bundle.config.cascade) {
        out << "source: cascade a=" << bundle.config.cascade->a
            << " depth=" << bundle.config.cascade->depth << "\n";
    } else {
        out << "source: " << bundle.config.input_path << " column "
            << bundle.config.csv.column << "\n";
    }
    out << "q range: [-" << bundle.config.Q << ", " << bundle.config.Q << "] step "
        << bundle.config.q_step << ", detrend order " << bundle.config.detrend.poly_order
        << (bundle.config.detrend.integrate_profile ? " on integrated profile" : "") << "\n";
    out << "surrogates: " << to_string(bundle.config.surrogate) << " x"
        << bundle.config.n_replicas << " at " << bundle.config.confidence * 100.0
        << "% confidence, seed " << bundle.config.seed << "\n";
    out << "wall time: " << format_number(bundle.wall_seconds) << " s\n\n";

    out << "transform              delta_h_obs delta_h_unb   delta_h2    delta_h  flags\n";
    for (const TransformResult& r : bundle.results) {
        std::string name = to_string(r.kind);
        name.resize(22, ' ');
        out << name << format_fixed(r.report.delta_h_obs) << "  ";
        if (r.report.delta_h_unb) {
            out << format_fixed(*r.report.delta_h_unb);
        } else {
            out << "         x";
        }
        out << " " << format_fixed(r.report.delta_h2) << " " << format_fixed(r.report.delta_h);
        const std::vector<std::string> flags = r.report.flags.active_names();
        out << "  ";
        if (flags.empty()) {
            out << "-";
        } else {
            for (std::size_t i = 0; i < flags.size(); ++i) {
                if (i > 0) out << ",";
                out << flags[i];
            }
        }
        out << "\n";
    }
    return out.str();
}

std::vector<std::string> emit_outputs(const ReportBundle& bundle, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IOError("cannot create output directory " + dir + ": " + ec.message());
    }
    std::vector<std::string> written;

    const std::string json_path = dir + "/report.json";
    write_file(json_path, render_json(bundle));
    written.push_back(json_path);

    const std::string text_path = dir + "/report.txt";
    write_file(text_path, render_text(bundle));
    written.push_back(text_path);

    for (const TransformResult& r : bundle.results) {
        std::ostringstream tsv;
        tsv << "q\th\tstd_error\tribbon_lower\tribbon_upper\n";
        for (std::size_t qi = 0; qi < r.profile.q_grid.size(); ++qi) {
            tsv << format_number(r.profile.q_grid.values[qi]) << "\t"
                << format_number(r.profile.h[qi]) << "\t"
                << format_number(r.profile.std_error[qi]) << "\t"
                << format_number(r.ribbon.lower[qi]) << "\t"
                << format_number(r.ribbon.upper[qi]) << "\n";
        }
        const std::string path = dir + "/profile_" + to_string(r.kind) + ".tsv";
        write_file(path, tsv.str());
        written.push_back(path);
    }
    return written;
}

std::vector<SweepPoint> run_sweep(const SweepConfig& cfg) {
    if (!(cfg.a_min > 0.5 && cfg.a_max < 1.0 && cfg.a_min <= cfg.a_max)) {
        throw ConfigError("sweep needs 0.5 < a_min <= a_max < 1");
    }
    if (!(cfg.a_step > 0.0)) {
        throw ConfigError("sweep needs a positive a step");
    }
    if (cfg.n_seeds < 1) {
        throw ConfigError("sweep needs at least one seed");
    }
    const QGrid q_grid = QGrid::make(cfg.Q, cfg.q_step);

    std::vector<SweepPoint> points;
    const int n_steps = static_cast<int>(std::floor((cfg.a_max - cfg.a_min) / cfg.a_step + 1e-9));
    for (int step = 0; step <= n_steps; ++step) {
        const double a = cfg.a_min + cfg.a_step * step;
        std::vector<double> spreads, integrals;
        for (int s = 0; s < cfg.n_seeds; ++s) {
            CascadeParams params;
            params.a = a;
            params.depth = cfg.depth;
            params.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(step) * 0x10000ULL +
                                                    static_cast<std::uint64_t>(s));
            const TimeSeries cascade = generate(params);
            const TauGrid tau_grid =
                TauGrid::default_for(cascade.size(), cfg.detrend.poly_order, cfg.tau_points);
            const FluctuationGrid grid = fluctuation_grid(cascade, q_grid, tau_grid, cfg.detrend);
            const HurstProfile profile = fit_profile(grid, grid.full_range());
            spreads.push_back(delta_h(profile, cfg.Q));
            integrals.push_back(delta_h2(profile, cfg.Q));
        }
        SweepPoint point;
        point.a = a;
        point.delta_h_th = analytic_spread(a, cfg.Q);
        point.delta_h_obs = median(std::move(spreads));
        point.delta_h2 = median(std::move(integrals));
        points.push_back(point);
    }
    return points;
}

std::string render_sweep_tsv(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "a\tdelta_h_th\tdelta_h_obs\tdelta_h2\n";
    for (const SweepPoint& p : points) {
        out << format_number(p.a) << "\t" << format_number(p.delta_h_th) << "\t"
            << format_number(p.delta_h_obs) << "\t" << format_number(p.delta_h2) << "\n";
    }
    return out.str();
}

std::string emit_sweep(const std::vector<SweepPoint>& points, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IOError("cannot create output directory " + dir + ": " + ec.message());
    }
    const std::string path = dir + "/sweep.tsv";
    write_file(path, render_sweep_tsv(points));
    return path;
}

}
