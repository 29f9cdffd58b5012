// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jamloc/config.hpp"

namespace jamloc {

/// In-memory CSV: header plus records, all fields pre-formatted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// RFC 4180 text with CRLF-free "\n" line endings; fields are quoted only when needed.
    std::string to_string() const;
};

/// Locale-independent fixed notation ("." separator), 6 decimals.
std::string format_number(double v);

enum class FrequencyMode { Constant, Random };

struct PresetOptions {
    unsigned threads = 1;
    std::optional<LeanKind> lean;          // multi: restrict to one lean case
    std::optional<int> m_jammers;          // multi: restrict to one jammer count
    std::optional<FrequencyMode> freq_mode;  // modulation: restrict the window sweep
};

struct PresetResult {
    std::string preset;
    CsvTable table;
    nlohmann::json grids;  // grid description for the manifest
    RunConfig config;      // resolved base config
};

/// Scenario behind one multi-preset curve: m constant jammers, direct attribution (p_a set by the
/// sweep), cruise leaning toward jammer A.
ScenarioConfig multi_scenario(const RunConfig& base, int m_jammers, LeanKind lean);

/// Scenario behind the modulation preset: two sinusoidal jammers with the given phase offset, one
/// modulation period of measurements, physical attribution. Errors are measured against the jammer
/// most bearings were attributed to unless the config names a target.
ScenarioConfig modulation_scenario(const RunConfig& base, double phase_rad, modulation::FrequencyJitter jitter,
                                   LeanKind lean);

/// Ideal single-jammer study: N in {8, 20, 40} x peak power in {5, 10, 15, 20, 25} dBm.
PresetResult run_ideal(const RunConfig& base, const PresetOptions& opts);

/// Multi-jammer attribution study: M in {2, 3}, lean in {strong, slight}, p_a from 1/M to 1.
PresetResult run_multi(const RunConfig& base, const PresetOptions& opts);

/// Power-modulation study with two jammers: phase sweep and measurement-window sweep.
PresetResult run_modulation(const RunConfig& base, const PresetOptions& opts);

/// Custom scenario: a single point, or the sweep embedded in the config.
PresetResult run_custom(const RunConfig& base, const PresetOptions& opts);

/// Dispatches on "ideal", "multi", "modulation" or "run". Throws ConfigError on other names.
PresetResult run_preset(const std::string& preset, const RunConfig& base, const PresetOptions& opts);

/// p_a grid {1/M, then multiples of 0.1 above 1/M, ..., 1}.
std::vector<double> attribution_grid(int m_jammers);

/// Modulation preset grids.
std::vector<double> phase_grid();
std::vector<double> window_grid();

struct RunTimes {
    std::string started_utc;
    std::string finished_utc;
};

std::string utc_now_iso8601();

/// Manifest describing one preset run; "config" replays the run.
nlohmann::json make_manifest(const PresetResult& r, const PresetOptions& opts, const RunTimes& times,
                             const std::string& csv_path, const std::string& manifest_path);

/// Writes <dir>/<preset>.csv and <dir>/<preset>.manifest.json through temporary files renamed
/// into place, so a failed run never leaves a partial CSV. Returns the CSV path.
std::string write_outputs(const PresetResult& r, const PresetOptions& opts, const RunTimes& times,
                          const std::string& out_dir);

}  // namespace jamloc
