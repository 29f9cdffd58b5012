// SPDX-License-Identifier: Apache-2.0
#include "jamloc/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "jamloc/error.hpp"
#include "jamloc/version.hpp"

namespace jamloc {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string metric_column(ErrorMetric m) { return m == ErrorMetric::Rmse ? "rmse_m" : "mae_m"; }

/// Appends "<prefix...>, method, error, ci95, trials, failures" for each method.
void append_stats(CsvTable& t, const std::vector<std::string>& prefix, const std::array<MethodStats, 3>& stats) {
    for (const MethodStats& s : stats) {
        std::vector<std::string> row = prefix;
        row.emplace_back(method_name(s.method));
        row.push_back(format_number(s.error_m));
        row.push_back(format_number(s.ci95_m));
        row.push_back(std::to_string(s.trials));
        row.push_back(std::to_string(s.failures));
        t.rows.push_back(std::move(row));
    }
}

std::vector<std::string> header_with(std::vector<std::string> prefix, ErrorMetric metric) {
    prefix.insert(prefix.end(), {"method", metric_column(metric), "ci95_m", "trials", "failures"});
    return prefix;
}

JammerTemplate template_like(const RunConfig& base, ModulationScheme modulation) {
    JammerTemplate t;
    if (!base.scenario.jammers.empty()) t.boresight = base.scenario.jammers.front().boresight;
    t.modulation = std::move(modulation);
    t.random_peak = true;
    return t;
}

const char* lean_name(LeanKind k) {
    switch (k) {
        case LeanKind::None: return "none";
        case LeanKind::Strong: return "strong";
        case LeanKind::Slight: return "slight";
    }
    return "none";
}

RunConfig modulation_base(const RunConfig& base, LeanKind lean) {
    RunConfig b = base;
    b.scenario.attribution = attribution::PhysicalDominant{};
    b.scenario.lean.kind = lean;
    // Under modulation the leaned-toward jammer is not always the one the bearings lock onto.
    if (!b.scenario.target) b.scenario.target = ErrorTarget::Majority;
    return b;
}

ScenarioConfig two_sinusoids(const RunConfig& base, double phase_rad, modulation::FrequencyJitter jitter) {
    ScenarioConfig s = base.scenario;
    modulation::Sinusoidal a;
    a.jitter = jitter;
    modulation::Sinusoidal b = a;
    b.phase_rad = phase_rad;
    s.jammers = {template_like(base, a), template_like(base, b)};
    s.measurement_window_s = a.period_s;
    return s;
}

}  // namespace

std::string CsvTable::to_string() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(fields[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
    std::string s(buf, res.ptr);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::vector<double> attribution_grid(int m_jammers) {
    if (m_jammers < 1) throw ConfigError("attribution_grid: need at least one jammer");
    std::vector<double> g{1.0 / m_jammers};
    for (int k = 10 / m_jammers + 1; k <= 10; ++k) g.push_back(k / 10.0);
    return g;
}

std::vector<double> phase_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 8; ++k) g.push_back(k * std::numbers::pi / 8.0);
    return g;
}

std::vector<double> window_grid() {
    std::vector<double> g;
    for (int k = 2; k <= 31; ++k) g.push_back(k / 10.0);
    return g;
}

PresetResult run_ideal(const RunConfig& base, const PresetOptions& opts) {
    ScenarioConfig s = base.scenario;
    s.jammers = {template_like(base, modulation::Constant{})};
    s.attribution = attribution::PhysicalDominant{};
    s.lean.kind = LeanKind::None;

    const std::vector<int> counts{8, 20, 40};
    const std::vector<double> powers{5.0, 10.0, 15.0, 20.0, 25.0};
    PresetResult r{"ideal", {header_with({"n_samples", "max_power_dbm"}, s.metric), {}}, {}, base};
    for (int n : counts) {
        const ScenarioConfig sn = apply_override(s, "n_samples", n);
        const SweepReport rep = run_sweep(sn, {"max_power_dbm", powers}, opts.threads);
        for (const auto& pt : rep.points) append_stats(r.table, {std::to_string(n), format_number(pt.value)}, pt.stats);
    }
    r.grids = {{"n_samples", counts}, {"max_power_dbm", powers}};
    return r;
}

PresetResult run_multi(const RunConfig& base, const PresetOptions& opts) {
    std::vector<int> ms{2, 3};
    if (opts.m_jammers) {
        ms = {*opts.m_jammers};
    }
    std::vector<LeanKind> leans{LeanKind::Strong, LeanKind::Slight};
    if (opts.lean) {
        if (*opts.lean == LeanKind::None) throw ConfigError("multi: lean must be strong or slight");
        leans = {*opts.lean};
    }

    PresetResult r{"multi", {header_with({"m_jammers", "lean_case", "p_a"}, base.scenario.metric), {}}, {}, base};
    json grids = json::array();
    for (int m : ms) {
        for (LeanKind lean : leans) {
            const ScenarioConfig s = multi_scenario(base, m, lean);
            const std::vector<double> grid = attribution_grid(m);
            const SweepReport rep = run_sweep(s, {"p_a", grid}, opts.threads);
            for (const auto& pt : rep.points) {
                append_stats(r.table, {std::to_string(m), lean_name(lean), format_number(pt.value)}, pt.stats);
            }
            grids.push_back({{"m_jammers", m}, {"lean", lean_name(lean)}, {"p_a", grid}});
        }
    }
    r.grids = grids;
    return r;
}

ScenarioConfig multi_scenario(const RunConfig& base, int m_jammers, LeanKind lean) {
    if (m_jammers < 2) throw ConfigError("multi: the jammer count must be >= 2");
    ScenarioConfig s = base.scenario;
    s.jammers.assign(static_cast<std::size_t>(m_jammers), template_like(base, modulation::Constant{}));
    s.lean.kind = lean;
    s.attribution = attribution::DirectProbability{1.0};
    return s;
}

ScenarioConfig modulation_scenario(const RunConfig& base, double phase_rad, modulation::FrequencyJitter jitter,
                                   LeanKind lean) {
    return two_sinusoids(modulation_base(base, lean), phase_rad, jitter);
}

PresetResult run_modulation(const RunConfig& base, const PresetOptions& opts) {
    const LeanKind lean = opts.lean.value_or(LeanKind::Strong);
    const RunConfig b = modulation_base(base, lean);

    PresetResult r{"modulation",
                   {header_with({"sweep", "scheme", "phi_rad", "tm_over_t", "freq_mode"}, base.scenario.metric), {}},
                   {},
                   base};

    // Phase sweep, scheme ii, one modulation period of measurements.
    const std::vector<double> phases = phase_grid();
    {
        const ScenarioConfig s = two_sinusoids(b, 0.0, modulation::FrequencyJitter::None);
        const SweepReport rep = run_sweep(s, {"phase_rad", phases}, opts.threads);
        for (const auto& pt : rep.points) {
            append_stats(r.table, {"phase", "sinusoidal", format_number(pt.value), format_number(1.0), "constant"},
                         pt.stats);
        }
    }
    // Scheme i reference, phase-free.
    {
        ScenarioConfig s = b.scenario;
        s.jammers = {template_like(b, modulation::RandomUniform{}), template_like(b, modulation::RandomUniform{})};
        s.validate();
        const auto results = run_trials(s, opts.threads);
        append_stats(r.table, {"phase", "random_uniform", "", "", "none"}, aggregate_errors(results, s.metric));
    }

    // Window sweep at opposite phase.
    std::vector<FrequencyMode> modes{FrequencyMode::Constant, FrequencyMode::Random};
    if (opts.freq_mode) modes = {*opts.freq_mode};
    const std::vector<double> windows = window_grid();
    for (FrequencyMode mode : modes) {
        const auto jitter = mode == FrequencyMode::Constant ? modulation::FrequencyJitter::None
                                                            : modulation::FrequencyJitter::UniformFactor;
        const ScenarioConfig s = two_sinusoids(b, std::numbers::pi, jitter);
        const SweepReport rep = run_sweep(s, {"tm_over_t", windows}, opts.threads);
        for (const auto& pt : rep.points) {
            append_stats(r.table,
                         {"window", "sinusoidal", format_number(std::numbers::pi), format_number(pt.value),
                          mode == FrequencyMode::Constant ? "constant" : "random"},
                         pt.stats);
        }
    }
    r.grids = {{"phi_rad", phases}, {"tm_over_t", windows}, {"lean", lean_name(b.scenario.lean.kind)}};
    return r;
}

PresetResult run_custom(const RunConfig& base, const PresetOptions& opts) {
    const ScenarioConfig& s = base.scenario;
    PresetResult r{"run", {header_with({"parameter", "value"}, s.metric), {}}, {}, base};
    if (base.sweep) {
        const SweepReport rep = run_sweep(s, *base.sweep, opts.threads);
        for (const auto& pt : rep.points) append_stats(r.table, {rep.parameter, format_number(pt.value)}, pt.stats);
        r.grids = {{base.sweep->parameter, base.sweep->values}};
    } else {
        const auto results = run_trials(s, opts.threads);
        append_stats(r.table, {"none", ""}, aggregate_errors(results, s.metric));
        r.grids = json::object();
    }
    return r;
}

PresetResult run_preset(const std::string& preset, const RunConfig& base, const PresetOptions& opts) {
    base.scenario.validate();
    if (preset == "ideal") return run_ideal(base, opts);
    if (preset == "multi") return run_multi(base, opts);
    if (preset == "modulation") return run_modulation(base, opts);
    if (preset == "run") return run_custom(base, opts);
    throw ConfigError("unknown preset '" + preset + "'");
}

std::string utc_now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_manifest(const PresetResult& r, const PresetOptions& opts, const RunTimes& times,
                   const std::string& csv_path, const std::string& manifest_path) {
    json options = json::object();
    options["threads"] = opts.threads;
    if (opts.lean) options["lean"] = lean_name(*opts.lean);
    if (opts.m_jammers) options["m_jammers"] = *opts.m_jammers;
    if (opts.freq_mode) options["freq_mode"] = *opts.freq_mode == FrequencyMode::Constant ? "constant" : "random";
    return {
        {"manifest_version", 1},
        {"artifact", "jamloc"},
        {"version", kVersion},
        {"preset", r.preset},
        {"master_seed", r.config.scenario.master_seed},
        {"trials", r.config.scenario.trials},
        {"options", options},
        {"grids", r.grids},
        {"config", config_to_json(r.config)},
        {"started_utc", times.started_utc},
        {"finished_utc", times.finished_utc},
        {"outputs", {{"csv", csv_path}, {"manifest", manifest_path}}},
    };
}

std::string write_outputs(const PresetResult& r, const PresetOptions& opts, const RunTimes& times,
                          const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    const fs::path csv = fs::path(out_dir) / (r.preset + ".csv");
    const fs::path manifest = fs::path(out_dir) / (r.preset + ".manifest.json");
    auto write_atomically = [](const fs::path& target, const std::string& content) {
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write '" + tmp.string() + "'");
            out << content;
            if (!out.flush()) throw IoError("write failed for '" + tmp.string() + "'");
        }
        std::error_code rename_ec;
        fs::rename(tmp, target, rename_ec);
        if (rename_ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + rename_ec.message());
    };
    const json m = make_manifest(r, opts, times, csv.string(), manifest.string());
    write_atomically(csv, r.table.to_string());
    write_atomically(manifest, m.dump(2) + "\n");
    return csv.string();
}

}  // namespace jamloc
