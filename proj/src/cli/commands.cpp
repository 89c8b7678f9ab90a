#include "cli/commands.hpp"

#include "cli/io.hpp"
#include "owm/detector.hpp"
#include "owm/embedder.hpp"
#include "owm/exponents.hpp"
#include "owm/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace owm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Effective settings of one invocation: preset, then --config file, then
// explicit flags, each layer overriding the previous one key by key.
class Settings {
public:
    void overlay(const json& layer) {
        if (!layer.is_object()) throw UsageError("configuration must be a JSON object");
        for (const auto& [key, value] : layer.items()) values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.contains(key); }

    double number(const std::string& key) const {
        const json& v = require(key);
        if (!v.is_number()) throw UsageError("--" + flag(key) + " must be a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::uint64_t count(const std::string& key) const {
        const json& v = require(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
        }
        throw UsageError("--" + flag(key) + " must be a non-negative integer");
    }

    std::uint64_t count_or(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? count(key) : fallback;
    }

    std::string text(const std::string& key) const {
        const json& v = require(key);
        if (!v.is_string()) throw UsageError("--" + flag(key) + " must be a string");
        return v.get<std::string>();
    }

    std::string text_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? text(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) const {
        const json& v = require(key);
        std::vector<double> out;
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) throw UsageError("--" + flag(key) + " must be a list of numbers");
        for (const auto& item : v) {
            if (!item.is_number()) throw UsageError("--" + flag(key) + " must be a list of numbers");
            out.push_back(item.get<double>());
        }
        if (out.empty()) throw UsageError("--" + flag(key) + " is empty");
        return out;
    }

private:
    static std::string flag(std::string key) {
        for (char& ch : key)
            if (ch == '_') ch = '-';
        return key;
    }

    const json& require(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw UsageError("missing required flag --" + flag(key));
        return *it;
    }

    json values_ = json::object();
};

// Explicit flags collected during parsing.
struct FlagLayer {
    json values = json::object();
};

void add_number(CLI::App* app, FlagLayer& layer, const std::string& name, const std::string& key,
                const std::string& help) {
    app->add_option_function<double>(
        name, [&layer, key](double v) { layer.values[key] = v; }, help);
}

void add_count(CLI::App* app, FlagLayer& layer, const std::string& name, const std::string& key,
               const std::string& help) {
    app->add_option_function<std::uint64_t>(
        name, [&layer, key](std::uint64_t v) { layer.values[key] = v; }, help);
}

void add_text(CLI::App* app, FlagLayer& layer, const std::string& name, const std::string& key,
              const std::string& help) {
    app->add_option_function<std::string>(
        name, [&layer, key](const std::string& v) { layer.values[key] = v; }, help);
}

void add_list(CLI::App* app, FlagLayer& layer, const std::string& name, const std::string& key,
              const std::string& help) {
    app->add_option_function<std::vector<double>>(
           name, [&layer, key](const std::vector<double>& v) { layer.values[key] = v; }, help)
        ->delimiter(',');
}

void add_system_flags(CLI::App* app, FlagLayer& layer) {
    add_number(app, layer, "--D", "D", "distortion budget per dimension (D > 0)");
    add_number(app, layer, "--sx2", "sx2", "host variance sigma_X^2 (> 0)");
    add_number(app, layer, "--sz2", "sz2", "attack noise variance sigma_Z^2 (>= 0)");
    add_number(app, layer, "--lambda", "lambda", "false-positive exponent lambda (> 0)");
}

void add_common_flags(CLI::App* app, std::string* config_path,
                      std::string* preset) {
    app->add_option("--config", *config_path, "JSON file with flag values (flags win)");
    if (preset) app->add_option("--preset", *preset, "figure-data preset");
}

json preset_settings(const std::string& command, const std::string& name) {
    if (name.empty()) return json::object();
    static const std::map<std::string, std::pair<std::string, json>> presets{
        {"fig2", {"sweep", {{"axis", "lambda"}, {"from", 0.01}, {"to", 1.5}, {"points", 150},
                            {"sx2", 1.0}, {"D", 2.0}, {"sz2_list", {0.1, 0.5, 1.0, 2.0}}}}},
        {"fig3", {"sweep", {{"axis", "sz2"}, {"from", 0.01}, {"to", 4.0}, {"points", 200},
                            {"sx2", 1.0}, {"lambda", 0.1}, {"D_list", {0.5, 1.0, 2.0}}}}},
        {"fig4", {"sweep", {{"axis", "sx2"}, {"from", 0.01}, {"to", 4.0}, {"points", 200},
                            {"sz2", 1.0}, {"lambda", 0.1}, {"D_list", {0.5, 1.0, 2.0}}}}},
        {"fig5", {"simulate", {{"D", 2.0}, {"sx2", 1.0}, {"lambda", 0.6},
                               {"sz2_list", {0.52, 0.53, 0.54, 0.55}},
                               {"n_list", {100, 200, 400, 800}}, {"trials", 100000},
                               {"seed", 1}}}},
        {"fig6", {"simulate", {{"D", 0.75}, {"sx2", 1.0}, {"sz2", 0.0},
                               {"lambda_list", {0.58, 0.6, 0.62, 0.64}},
                               {"n_list", {100, 200, 400, 800}}, {"trials", 100000},
                               {"seed", 1}}}},
        {"fig7", {"compare-embedders", {{"D", 2.0}, {"sx2", 1.0}, {"sz2", 0.0},
                                        {"lambda_from", 0.05}, {"lambda_to", 1.5},
                                        {"lambda_points", 30}, {"n", 256}, {"trials", 10000},
                                        {"seed", 1}}}},
    };
    const auto it = presets.find(name);
    if (it == presets.end()) throw UsageError("unknown preset '" + name + "'");
    if (it->second.first != command)
        throw UsageError("preset " + name + " belongs to the '" + it->second.first + "' command");
    return it->second.second;
}

Settings build_settings(const std::string& command, const std::string& preset,
                        const std::string& config_path, const FlagLayer& flags) {
    Settings settings;
    settings.overlay(preset_settings(command, preset));
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot open config file " + config_path);
        json config;
        try {
            in >> config;
        } catch (const json::parse_error& e) {
            throw UsageError("config file " + config_path + ": " + e.what());
        }
        settings.overlay(config);
    }
    settings.overlay(flags.values);
    return settings;
}

SystemParams system_params(const Settings& s, double default_distortion = -1.0) {
    const double d = default_distortion > 0 ? s.number_or("D", default_distortion) : s.number("D");
    return SystemParams::make(s.number("sx2"), s.number_or("sz2", 0.0), d, s.number("lambda"));
}

// A series varies one system parameter across several output files.
struct Series {
    std::string name;  // "D", "sx2", "sz2" or "lambda"
    std::vector<double> values;
};

std::optional<Series> series_of(const Settings& s) {
    std::optional<Series> found;
    for (const char* name : {"D", "sx2", "sz2", "lambda"}) {
        const std::string key = std::string(name) + "_list";
        if (!s.has(key)) continue;
        if (found) throw UsageError("only one of --D-list/--sx2-list/--sz2-list/--lambda-list may be given");
        found = Series{name, s.numbers(key)};
    }
    return found;
}

void set_param(json& layer, const std::string& name, double value) { layer[name] = value; }

void emit_table(const CsvTable& table, const Settings& s, const fs::path& path, std::ostream& out) {
    const std::string format = s.text_or("format", "csv");
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    const std::string body = format == "csv" ? table.str() : table.to_json().dump(2) + "\n";
    if (path.empty()) {
        out << body;
        return;
    }
    write_file_atomic(path, body);
    out << path.string() << "\n";
}

std::vector<fs::path> output_paths(const Settings& s, const std::optional<Series>& series) {
    const fs::path base = s.has("out") ? fs::path(s.text("out")) : fs::path();
    if (!series) return {base};
    if (base.empty()) throw UsageError("--out is required when several series are produced");
    std::vector<fs::path> paths;
    for (double v : series->values) paths.push_back(series_path(base, series->name, v));
    return paths;
}

// exponent ------------------------------------------------------------------

int cmd_exponent(const Settings& s, std::ostream& out) {
    const SystemParams p = system_params(s);
    const std::string method = s.text_or("method", "closed-form");
    ExponentReport report;
    if (method == "closed-form") {
        report = efn_closed_form(p);
    } else if (method == "oracle") {
        report = p.attack_variance > 0.0
                     ? efn_numeric_oracle(p, s.number_or("tol", 1e-10))
                     : efn_attack_free(p.distortion, p.host_variance, p.fp_exponent);
    } else {
        throw UsageError("--method must be closed-form or oracle");
    }
    out << exponent_json(report).dump() << "\n";
    return kExitOk;
}

// sweep ---------------------------------------------------------------------

int cmd_sweep(const Settings& s, std::ostream& out) {
    const std::string axis = s.text("axis");
    if (axis != "lambda" && axis != "sz2" && axis != "sx2" && axis != "D")
        throw UsageError("--axis must be one of lambda, sz2, sx2, D");
    const double from = s.number("from");
    const double to = s.number("to");
    const std::uint64_t points = s.count("points");
    if (!(from < to)) throw UsageError("sweep range needs --from < --to");
    if (points < 2) throw UsageError("sweep needs --points >= 2");

    const auto series = series_of(s);
    if (series && series->name == axis) throw UsageError("series parameter equals the sweep axis");
    const auto paths = output_paths(s, series);
    const std::size_t count = series ? series->values.size() : 1;

    for (std::size_t k = 0; k < count; ++k) {
        CsvTable table(kSweepHeader);
        for (std::uint64_t i = 0; i < points; ++i) {
            const double value =
                i + 1 == points ? to : from + (to - from) * static_cast<double>(i) / (points - 1);
            Settings point = s;
            json layer = json::object();
            if (series) set_param(layer, series->name, series->values[k]);
            set_param(layer, axis, value);
            point.overlay(layer);
            const ExponentReport r = efn_closed_form(system_params(point));
            table.add_row({format_number(value), format_number(r.e_fn), format_number(r.r_star),
                           format_number(r.q_star), to_string(r.method)});
        }
        emit_table(table, s, paths[k], out);
    }
    return kExitOk;
}

// simulate ------------------------------------------------------------------

std::vector<std::size_t> dimensions(const Settings& s) {
    std::vector<std::size_t> out;
    if (s.has("n_list")) {
        for (double v : s.numbers("n_list")) {
            if (!(v >= 1) || std::floor(v) != v) throw UsageError("--n-list entries must be positive integers");
            out.push_back(static_cast<std::size_t>(v));
        }
    } else {
        const std::uint64_t n = s.count("n");
        if (n == 0) throw UsageError("--n must be >= 1");
        out.push_back(n);
    }
    return out;
}

int cmd_simulate(const std::string& kind, const Settings& s, std::ostream& out) {
    if (kind != "fn" && kind != "fp") throw UsageError("simulate expects 'fn' or 'fp'");
    const bool false_negative = kind == "fn";
    const auto series = series_of(s);
    const auto paths = output_paths(s, series);
    const std::size_t count = series ? series->values.size() : 1;
    const std::vector<std::size_t> ns = dimensions(s);

    TrialConfig base;
    base.trials = s.count("trials");
    base.master_seed = s.count_or("seed", 1);
    base.embedder = parse_embedder_kind(s.text_or("embedder", false_negative ? "optimal" : "none"));
    if (s.has("pin_watermark")) base.pinned_watermark_seed = s.count("pin_watermark");
    if (base.trials == 0) throw ParameterError("trials must be >= 1");

    for (std::size_t k = 0; k < count; ++k) {
        Settings point = s;
        if (series) {
            json layer = json::object();
            set_param(layer, series->name, series->values[k]);
            point.overlay(layer);
        }
        TrialConfig config = base;
        config.params = system_params(point, false_negative ? -1.0 : 1.0);
        CsvTable table(kSimulateHeader);
        const double theory = theory_exponent(config);
        for (std::size_t n : ns) {
            config.n = n;
            const TrialBatchResult batch =
                false_negative ? simulate_fn(config) : simulate_fp(config);
            table.add_row(simulate_row(batch, theory));
        }
        emit_table(table, s, paths[k], out);
    }
    return kExitOk;
}

// compare-embedders ---------------------------------------------------------

std::vector<double> lambda_grid(const Settings& s) {
    if (s.has("lambda_list")) return s.numbers("lambda_list");
    const double from = s.number("lambda_from");
    const double to = s.number("lambda_to");
    const std::uint64_t points = s.count("lambda_points");
    if (points == 1) return {from};
    if (points == 0 || !(from < to)) throw UsageError("lambda grid needs --lambda-from < --lambda-to and --lambda-points >= 1");
    std::vector<double> grid;
    for (std::uint64_t i = 0; i < points; ++i)
        grid.push_back(i + 1 == points ? to : from + (to - from) * static_cast<double>(i) / (points - 1));
    return grid;
}

int cmd_compare(const Settings& s, std::ostream& out) {
    const double d = s.number("D");
    const double sx2 = s.number("sx2");
    const double sz2 = s.number_or("sz2", 0.0);
    const std::uint64_t n = s.count("n");
    const std::uint64_t trials = s.count("trials");
    const std::uint64_t seed = s.count_or("seed", 1);
    const PositivityThresholds thresholds = positivity_thresholds(d, sx2);

    CsvTable table(kCompareHeader);
    for (double lambda : lambda_grid(s)) {
        TrialConfig config;
        config.n = n;
        config.trials = trials;
        config.master_seed = seed;
        config.params = SystemParams::make(sx2, sz2, d, lambda);
        config.embedder = EmbedderKind::optimal;
        const TrialBatchResult opt = simulate_fn(config);
        config.embedder = EmbedderKind::sign;
        const TrialBatchResult sgn = simulate_fn(config);
        table.add_row({format_number(lambda), format_number(efn_closed_form(config.params).e_fn),
                       std::to_string(opt.failures), format_number(opt.p_hat),
                       format_number(opt.ci_low), format_number(opt.ci_high),
                       format_number(opt.empirical_exponent), std::to_string(sgn.failures),
                       format_number(sgn.p_hat), format_number(sgn.ci_low),
                       format_number(sgn.ci_high), format_number(sgn.empirical_exponent),
                       format_number(thresholds.lambda1), format_number(thresholds.lambda2),
                       std::to_string(n), std::to_string(trials), std::to_string(seed)});
    }
    emit_table(table, s, s.has("out") ? fs::path(s.text("out")) : fs::path(), out);
    return kExitOk;
}

// validate ------------------------------------------------------------------

int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err) {
    const double tol = s.number_or("tol", 1e-6);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("--tol must be a positive number");
    const OracleComparison cmp = compare_with_oracle(validation_grid());
    const json worst{{"D", cmp.worst.distortion},
                     {"sx2", cmp.worst.host_variance},
                     {"sz2", cmp.worst.attack_variance},
                     {"lambda", cmp.worst.fp_exponent}};
    const bool pass = cmp.max_abs_diff < tol;
    out << json{{"max_abs_diff", cmp.max_abs_diff},
                {"tol", tol},
                {"points", cmp.points},
                {"zero_points", cmp.zero_points},
                {"worst", worst},
                {"pass", pass}}
               .dump()
        << "\n";
    if (!pass) {
        err << "closed form and oracle differ by " << format_number(cmp.max_abs_diff)
            << " >= tol " << format_number(tol) << " at " << worst.dump() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

// embed / detect ------------------------------------------------------------

WatermarkSequence load_watermark(const Settings& s, std::size_t n, std::optional<std::uint64_t>& seed) {
    if (s.has("watermark")) {
        const std::vector<double> values = read_signal(s.text("watermark"));
        if (values.size() != n) {
            throw ParameterError("watermark has " + std::to_string(values.size()) +
                                 " components but the signal has " + std::to_string(n));
        }
        seed.reset();
        return WatermarkSequence::from_values(values);
    }
    if (!s.has("seed")) throw UsageError("give --seed or --watermark");
    seed = s.count("seed");
    return generate_watermark(n, *seed);
}

int cmd_embed(const Settings& s, std::ostream& out) {
    const std::vector<double> host = read_signal(s.text("input"));
    const double d = s.number("D");
    const DetectionGeometry g = derive_geometry(s.number("lambda"));
    const fs::path target = s.text("out");
    std::optional<std::uint64_t> seed;
    const WatermarkSequence u = load_watermark(s, host.size(), seed);
    const std::string embedder = s.text_or("embedder", "optimal");
    EmbedResult result;
    if (embedder == "optimal") {
        result = embed_optimal(HostSignal{host}, u, d, g);
    } else if (embedder == "sign") {
        result = embed_sign(HostSignal{host}, u, d);
    } else {
        throw UsageError("--embedder must be optimal or sign");
    }

    const json sidecar{{"a", number_or_null(result.a)},
                       {"b", number_or_null(result.b)},
                       {"r", result.coords.r},
                       {"alpha", result.coords.alpha},
                       {"v1", result.coords.v1},
                       {"v2", result.coords.v2},
                       {"v3", result.coords.v3},
                       {"distortion_used", result.distortion_used},
                       {"branch", to_string(result.branch)},
                       {"n", host.size()},
                       {"D", d},
                       {"lambda", g.fp_exponent},
                       {"seed", seed ? json(*seed) : json(nullptr)}};
    write_file_atomic(target, format_signal(result.y));
    const fs::path sidecar_path = target.string() + ".json";
    write_file_atomic(sidecar_path, sidecar.dump(2) + "\n");
    out << target.string() << "\n" << sidecar_path.string() << "\n";
    return kExitOk;
}

int cmd_detect(const Settings& s, std::ostream& out) {
    const std::vector<double> signal = read_signal(s.text("input"));
    const DetectionGeometry g = derive_geometry(s.number("lambda"));
    std::optional<std::uint64_t> seed;
    const WatermarkSequence u = load_watermark(s, signal.size(), seed);
    json report = detection_json(detect(signal, u, g), seed.value_or(0));
    if (!seed) report["seed"] = nullptr;
    out << report.dump() << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimum one-bit watermarking: exponents, embedding, detection, Monte Carlo"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    std::string config_path;
    std::string preset;
    FlagLayer flags;

    auto* exponent = app.add_subcommand("exponent", "closed-form false-negative exponent (JSON)");
    add_system_flags(exponent, flags);
    add_text(exponent, flags, "--method", "method", "closed-form (default) or oracle");
    add_number(exponent, flags, "--tol", "tol", "oracle tolerance on r");
    add_common_flags(exponent, &config_path, nullptr);

    auto* sweep = app.add_subcommand("sweep", "exponent along one parameter axis (CSV)");
    add_system_flags(sweep, flags);
    add_text(sweep, flags, "--axis", "axis", "lambda, sz2, sx2 or D");
    add_number(sweep, flags, "--from", "from", "first axis value");
    add_number(sweep, flags, "--to", "to", "last axis value");
    add_count(sweep, flags, "--points", "points", "number of grid points (>= 2)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error rates (CSV)");
    std::string sim_kind;
    simulate->add_option("kind", sim_kind, "fn (false negatives) or fp (false positives)")
        ->required();
    add_system_flags(simulate, flags);
    add_count(simulate, flags, "--n", "n", "signal dimension");
    add_list(simulate, flags, "--n-list", "n_list", "comma-separated dimensions");
    add_count(simulate, flags, "--trials", "trials", "trials per batch (>= 1)");
    add_count(simulate, flags, "--seed", "seed", "master seed (default 1)");
    add_text(simulate, flags, "--embedder", "embedder", "optimal, sign or none");
    add_count(simulate, flags, "--pin-watermark", "pin_watermark", "use this watermark seed in every trial");

    auto* compare = app.add_subcommand("compare-embedders", "optimum vs sign embedder (CSV)");
    add_system_flags(compare, flags);
    add_number(compare, flags, "--lambda-from", "lambda_from", "first lambda");
    add_number(compare, flags, "--lambda-to", "lambda_to", "last lambda");
    add_count(compare, flags, "--lambda-points", "lambda_points", "number of lambda values");
    add_count(compare, flags, "--n", "n", "signal dimension");
    add_count(compare, flags, "--trials", "trials", "trials per embedder and lambda");
    add_count(compare, flags, "--seed", "seed", "master seed (default 1)");

    for (auto* sub : {sweep, simulate, compare}) {
        add_list(sub, flags, "--D-list", "D_list", "series over D (one output per value)");
        add_list(sub, flags, "--sx2-list", "sx2_list", "series over sigma_X^2");
        add_list(sub, flags, "--sz2-list", "sz2_list", "series over sigma_Z^2");
        add_text(sub, flags, "--out", "out", "output path (stdout when omitted and single series)");
        add_text(sub, flags, "--format", "format", "csv (default) or json");
        add_common_flags(sub, &config_path, &preset);
    }
    add_list(simulate, flags, "--lambda-list", "lambda_list", "series over lambda");
    add_list(sweep, flags, "--lambda-list", "lambda_list", "series over lambda");
    add_list(compare, flags, "--lambda-list", "lambda_list", "explicit lambda grid");

    auto* validate = app.add_subcommand("validate", "closed form vs numeric oracle on the built-in grid");
    add_number(validate, flags, "--tol", "tol", "maximum allowed |closed form - oracle| (default 1e-6)");

    auto* embed = app.add_subcommand("embed", "embed a watermark into a signal file");
    add_text(embed, flags, "--input", "input", "host signal, one real per line");
    add_count(embed, flags, "--seed", "seed", "watermark seed");
    add_text(embed, flags, "--watermark", "watermark", "watermark file of +1/-1 values");
    add_number(embed, flags, "--D", "D", "distortion budget per dimension");
    add_number(embed, flags, "--lambda", "lambda", "false-positive exponent");
    add_text(embed, flags, "--embedder", "embedder", "optimal (default) or sign");
    add_text(embed, flags, "--out", "out", "watermarked signal path (sidecar: <out>.json)");
    add_common_flags(embed, &config_path, nullptr);

    auto* detect_cmd = app.add_subcommand("detect", "run the detector on a signal file (JSON)");
    add_text(detect_cmd, flags, "--input", "input", "received signal, one real per line");
    add_count(detect_cmd, flags, "--seed", "seed", "watermark seed");
    add_text(detect_cmd, flags, "--watermark", "watermark", "watermark file of +1/-1 values");
    add_number(detect_cmd, flags, "--lambda", "lambda", "false-positive exponent");
    add_common_flags(detect_cmd, &config_path, nullptr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    if (threads < 0) {
        err << "error: --threads must be >= 0\n";
        return kExitUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        const CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        const Settings s = build_settings(name, preset, config_path, flags);
        if (name == "exponent") return cmd_exponent(s, out);
        if (name == "sweep") return cmd_sweep(s, out);
        if (name == "simulate") return cmd_simulate(sim_kind, s, out);
        if (name == "compare-embedders") return cmd_compare(s, out);
        if (name == "validate") return cmd_validate(s, out, err);
        if (name == "embed") return cmd_embed(s, out);
        if (name == "detect") return cmd_detect(s, out);
        err << "error: unhandled command " << name << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const OracleError& e) {
        err << "oracle error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace owm::cli
