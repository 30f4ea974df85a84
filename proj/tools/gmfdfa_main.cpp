#include <cctype>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gmfdfa/errors.hpp"
#include "gmfdfa/pipeline.hpp"
#include "gmfdfa/version.hpp"

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        const std::string item =
            trim_copy(text.substr(start, pos == std::string::npos ? pos : pos - start));
        if (!item.empty()) items.push_back(item);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return items;
}

int config_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int parsed = std::stoi(value, &pos);
        if (pos == value.size()) return parsed;
    } catch (const std::exception&) {
    }
    throw gmfdfa::ConfigError("config key '" + key + "': invalid integer '" + value + "'");
}

double config_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double parsed = std::stod(value, &pos);
        if (pos == value.size()) return parsed;
    } catch (const std::exception&) {
    }
    throw gmfdfa::ConfigError("config key '" + key + "': invalid number '" + value + "'");
}

std::uint64_t config_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t parsed = std::stoull(value, &pos);
        if (pos == value.size()) return parsed;
    } catch (const std::exception&) {
    }
    throw gmfdfa::ConfigError("config key '" + key + "': invalid integer '" + value + "'");
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw gmfdfa::ConfigError("config key '" + key + "': expected a boolean, got '" + value +
                              "'");
}

// Flat key=value lines; '#' or ';' starts a comment line, blanks are skipped.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw gmfdfa::ConfigError("cannot open config file " + path);
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string content = trim_copy(line);
        if (content.empty() || content[0] == '#' || content[0] == ';') continue;
        const std::size_t eq = content.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw gmfdfa::ConfigError("config line " + std::to_string(line_number) +
                                      ": expected key=value, got '" + content + "'");
        }
        entries.emplace_back(trim_copy(content.substr(0, eq)),
                             trim_copy(content.substr(eq + 1)));
    }
    return entries;
}

char parse_delimiter(const std::string& text) {
    if (text == "\\t" || text == "tab") return '\t';
    if (text.size() != 1) {
        throw gmfdfa::ConfigError("delimiter must be a single character, got '" + text + "'");
    }
    return text[0];
}

gmfdfa::HeaderMode parse_header_mode(const std::string& text) {
    if (text == "auto") return gmfdfa::HeaderMode::automatic;
    if (text == "yes") return gmfdfa::HeaderMode::yes;
    if (text == "no") return gmfdfa::HeaderMode::no;
    throw gmfdfa::ConfigError("header mode must be auto, yes or no, got '" + text + "'");
}

int run_analyze(const std::string& input, double cascade_a, int cascade_depth,
                const std::string& column, const std::string& delimiter,
                const std::string& header, const std::vector<std::string>& transform_names,
                double Q, double q_step, int tau_points, std::optional<int> tau_min,
                std::optional<int> tau_max, int detrend_order, bool integrate,
                const std::string& surrogate, int replicas, double confidence, int window,
                std::uint64_t seed, const std::string& out_dir) {
    gmfdfa::AnalysisConfig cfg;
    if (!input.empty()) {
        cfg.input_path = input;
        cfg.csv.column = column;
        cfg.csv.delimiter = parse_delimiter(delimiter);
        cfg.csv.header = parse_header_mode(header);
    }
    if (cascade_a > 0.0) {
        gmfdfa::CascadeParams params;
        params.a = cascade_a;
        params.depth = cascade_depth;
        cfg.cascade = params;
    }
    for (const std::string& name : transform_names) {
        cfg.transforms.push_back(gmfdfa::transform_kind_from_string(name));
    }
    cfg.Q = Q;
    cfg.q_step = q_step;
    cfg.tau_points = tau_points;
    cfg.tau_min = tau_min;
    cfg.tau_max = tau_max;
    cfg.detrend.poly_order = detrend_order;
    cfg.detrend.integrate_profile = integrate;
    cfg.surrogate = gmfdfa::surrogate_method_from_string(surrogate);
    cfg.n_replicas = replicas;
    cfg.confidence = confidence;
    cfg.window.s = window;
    cfg.seed = seed;
    cfg.output_dir = out_dir;

    const gmfdfa::ReportBundle bundle = gmfdfa::run_analysis(cfg);
    std::cout << gmfdfa::render_text(bundle);
    for (const std::string& path : gmfdfa::emit_outputs(bundle, cfg.output_dir)) {
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

}

int main(int argc, char** argv) {
    CLI::App app{"multifractal spread analysis with surrogate bias ribbons (gmfdfa " +
                 std::string(gmfdfa::version_string) + ")"};
    app.require_subcommand(1);

    // analyze
    CLI::App* analyze = app.add_subcommand("analyze", "analyze a CSV series or a generated cascade");
    std::string config_path;
    analyze->add_option("--config", config_path,
                        "key=value config file; command-line flags override it");
    std::string input;
    double cascade_a = 0.0;
    int cascade_depth = 16;
    std::string column = "0";
    std::string delimiter = ",";
    std::string header = "auto";
    std::vector<std::string> transform_names;
    double Q = 15.0;
    double q_step = 0.25;
    int tau_points = 20;
    std::optional<int> tau_min;
    std::optional<int> tau_max;
    int detrend_order = 2;
    bool integrate = true;
    std::string surrogate = "shuffle";
    int replicas = 39;
    double confidence = 0.95;
    int window = 21;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    analyze->add_option("--input", input, "CSV file with the raw series");
    analyze->add_option("--cascade-a", cascade_a, "generate a binomial cascade with this factor");
    analyze->add_option("--cascade-depth", cascade_depth, "cascade depth n (length 2^n)")
        ->capture_default_str();
    analyze->add_option("--column", column, "CSV column name or 0-based index")
        ->capture_default_str();
    analyze->add_option("--delimiter", delimiter, "CSV delimiter (single character or 'tab')")
        ->capture_default_str();
    analyze->add_option("--header", header, "CSV header handling: auto, yes or no")
        ->capture_default_str();
    analyze->add_option("--transforms", transform_names,
                        "comma-separated transform list (default: increments, abs_increments, "
                        "squared_increments, abs_returns, moving_mean_absreturn, moving_stddev)")
        ->delimiter(',');
    analyze->add_option("--Q", Q, "largest |q| of the moment grid")->capture_default_str();
    analyze->add_option("--q-step", q_step, "q grid step")->capture_default_str();
    analyze->add_option("--tau-points", tau_points, "number of log-spaced window sizes")
        ->capture_default_str();
    analyze->add_option("--tau-min", tau_min, "smallest window size (default max(10, order + 2))");
    analyze->add_option("--tau-max", tau_max, "largest window size (default length / 4)");
    analyze->add_option("--detrend-order", detrend_order, "detrending polynomial order (0..5)")
        ->capture_default_str();
    analyze->add_flag("--integrate,!--no-integrate", integrate,
                      "analyze the cumulative sum of the mean-subtracted series");
    analyze->add_option("--surrogate", surrogate, "bias null model: shuffle or gaussian_matched")
        ->capture_default_str();
    analyze->add_option("--replicas", replicas, "surrogate replicas (at least 20)")
        ->capture_default_str();
    analyze->add_option("--confidence", confidence, "ribbon confidence level")
        ->capture_default_str();
    analyze->add_option("--window", window, "moving-volatility window length s")
        ->capture_default_str();
    analyze->add_option("--seed", seed, "master seed for cascade and surrogates")
        ->capture_default_str();
    analyze->add_option("--out", out_dir, "output directory")->capture_default_str();

    // sweep
    CLI::App* sweep = app.add_subcommand("sweep", "cascade spread sweep over the factor a");
    gmfdfa::SweepConfig sweep_cfg;
    std::string sweep_out = ".";
    sweep->add_option("--a-min", sweep_cfg.a_min, "first cascade factor")->capture_default_str();
    sweep->add_option("--a-max", sweep_cfg.a_max, "last cascade factor")->capture_default_str();
    sweep->add_option("--a-step", sweep_cfg.a_step, "factor step")->capture_default_str();
    sweep->add_option("--depth", sweep_cfg.depth, "cascade depth n (length 2^n)")
        ->capture_default_str();
    sweep->add_option("--seeds", sweep_cfg.n_seeds, "cascades per factor (median reported)")
        ->capture_default_str();
    sweep->add_option("--Q", sweep_cfg.Q, "largest |q| of the moment grid")->capture_default_str();
    sweep->add_option("--q-step", sweep_cfg.q_step, "q grid step")->capture_default_str();
    sweep->add_option("--tau-points", sweep_cfg.tau_points, "number of log-spaced window sizes")
        ->capture_default_str();
    sweep->add_option("--detrend-order", sweep_cfg.detrend.poly_order,
                      "detrending polynomial order (0..5)")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_cfg.seed, "master seed")->capture_default_str();
    sweep->add_option("--out", sweep_out, "output directory")->capture_default_str();

    // generate
    CLI::App* generate = app.add_subcommand("generate", "write a binomial cascade series to CSV");
    double gen_a = 0.65;
    int gen_depth = 16;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "cascade.csv";
    generate->add_option("--a", gen_a, "cascade factor in (0.5, 1)")->capture_default_str();
    generate->add_option("--depth", gen_depth, "cascade depth n (length 2^n)")
        ->capture_default_str();
    generate->add_option("--seed", gen_seed, "cascade seed")->capture_default_str();
    generate->add_option("--out", gen_out, "output CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) {
            if (!config_path.empty()) {
                using Setter = std::function<void(const std::string&)>;
                const std::map<std::string, Setter> setters = {
                    {"input", [&](const std::string& v) { input = v; }},
                    {"cascade-a",
                     [&](const std::string& v) { cascade_a = config_double("cascade-a", v); }},
                    {"cascade-depth",
                     [&](const std::string& v) { cascade_depth = config_int("cascade-depth", v); }},
                    {"column", [&](const std::string& v) { column = v; }},
                    {"delimiter", [&](const std::string& v) { delimiter = v; }},
                    {"header", [&](const std::string& v) { header = v; }},
                    {"transforms",
                     [&](const std::string& v) { transform_names = split_list(v); }},
                    {"Q", [&](const std::string& v) { Q = config_double("Q", v); }},
                    {"q-step", [&](const std::string& v) { q_step = config_double("q-step", v); }},
                    {"tau-points",
                     [&](const std::string& v) { tau_points = config_int("tau-points", v); }},
                    {"tau-min", [&](const std::string& v) { tau_min = config_int("tau-min", v); }},
                    {"tau-max", [&](const std::string& v) { tau_max = config_int("tau-max", v); }},
                    {"detrend-order",
                     [&](const std::string& v) { detrend_order = config_int("detrend-order", v); }},
                    {"integrate",
                     [&](const std::string& v) { integrate = config_bool("integrate", v); }},
                    {"surrogate", [&](const std::string& v) { surrogate = v; }},
                    {"replicas",
                     [&](const std::string& v) { replicas = config_int("replicas", v); }},
                    {"confidence",
                     [&](const std::string& v) { confidence = config_double("confidence", v); }},
                    {"window", [&](const std::string& v) { window = config_int("window", v); }},
                    {"seed", [&](const std::string& v) { seed = config_uint("seed", v); }},
                    {"out", [&](const std::string& v) { out_dir = v; }},
                };
                for (const auto& [key, value] : read_flat_config(config_path)) {
                    const auto it = setters.find(key);
                    if (it == setters.end()) {
                        throw gmfdfa::ConfigError("unknown config key '" + key + "'");
                    }
                    if (analyze->count("--" + key) > 0) continue;
                    it->second(value);
                }
            }
            return run_analyze(input, cascade_a, cascade_depth, column, delimiter, header,
                               transform_names, Q, q_step, tau_points, tau_min, tau_max,
                               detrend_order, integrate, surrogate, replicas, confidence, window,
                               seed, out_dir);
        }
        if (sweep->parsed()) {
            const std::vector<gmfdfa::SweepPoint> points = gmfdfa::run_sweep(sweep_cfg);
            std::cout << "wrote " << gmfdfa::emit_sweep(points, sweep_out) << "\n";
            return 0;
        }
        gmfdfa::CascadeParams params;
        params.a = gen_a;
        params.depth = gen_depth;
        params.seed = gen_seed;
        gmfdfa::write_series_csv(gen_out, gmfdfa::generate(params));
        std::cout << "wrote " << gen_out << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const gmfdfa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
