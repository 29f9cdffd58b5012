// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamloc/channel.hpp"
#include "jamloc/localizers.hpp"
#include "jamloc/sensing.hpp"

namespace jamloc {

/// Per-jammer scenario entry. The position is drawn from the jammer area each trial unless fixed.
/// A Constant scheme with random_peak set draws its peak from the scenario's peak power range
/// once per trial.
struct JammerTemplate {
    std::optional<Position3> position;
    AnglePair boresight{std::numbers::pi, 0.0};
    ModulationScheme modulation = modulation::Constant{};
    bool random_peak = true;
};

enum class ErrorMetric { Rmse, MeanAbsolute };

/// Which jammer a trial's position error is measured against.
enum class ErrorTarget {
    JammerA,   // jammer 0, the one the cruise leans toward
    Majority,  // the jammer that received most bearing attributions in the trial
};

struct ScenarioConfig {
    Box cruising_area{{0.0, 0.0, 5.0}, {100.0, 100.0, 25.0}};
    Box jammer_area{{40.0, 40.0, 12.0}, {60.0, 60.0, 18.0}};
    std::vector<JammerTemplate> jammers{JammerTemplate{}};
    double peak_power_min_dbm = 5.0;
    double peak_power_max_dbm = 25.0;
    double signal_power_dbm = -15.0;
    int n_samples = 40;
    PathLossModel path_loss{1.0, 2.0, 2.0};
    double antenna_dynamic_range_db = 20.0;
    double antenna_beam_exponent = 10.0;
    AoaErrorModel aoa_error;
    double position_error_power = 3.0;
    AttributionMode attribution = attribution::PhysicalDominant{};
    LeanSpec lean;
    double measurement_window_s = 1.0;
    double start_span_s = 100.0;
    SpgdParams spgd;
    std::optional<ErrorTarget> target;  // unset: jammer A, except in the modulation preset
    ErrorMetric metric = ErrorMetric::Rmse;
    int trials = 500;
    std::uint64_t master_seed = 1;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    NoiseParams noise() const;
};

/// Everything drawn for one trial before localization.
struct TrialScenario {
    std::vector<JammerSpec> jammers;
    std::vector<Position3> true_uav_positions;
    std::vector<AoaSample> samples;
    double window_start_s = 0.0;
};

TrialScenario simulate_trial(const ScenarioConfig& cfg, std::uint64_t trial_index);

struct TrialResult {
    std::uint64_t trial_index = 0;
    bool failed = false;
    std::string failure;
    Position3 true_position;
    int target_jammer = 0;
    std::array<Estimate, 3> estimates{};
    std::array<double, 3> errors{};
    int samples_from_target = 0;
};

/// Runs all localizers on one simulated sample set. Deterministic in (cfg, trial_index).
/// Singular geometry is reported through TrialResult::failed rather than thrown.
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// cfg.trials trials on `threads` workers, returned in trial-index order.
std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, unsigned threads);

struct MethodStats {
    Method method = Method::LSE;
    double error_m = 0.0;  // RMSE or mean absolute error, per ErrorMetric
    double ci95_m = 0.0;
    int trials = 0;        // attempted
    int failures = 0;
};

/// Per-method aggregate over successful trials in trial-index order. 95% half-width by normal
/// approximation (delta method for RMSE). Throws EmptyReportError when no trial succeeded.
std::array<MethodStats, 3> aggregate_errors(std::span<const TrialResult> results, ErrorMetric metric = ErrorMetric::Rmse);

/// Fraction of trials that failed on singular geometry; 0 for an empty list.
double failure_rate(std::span<const TrialResult> results);

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

struct SweepPoint {
    double value = 0.0;
    std::array<MethodStats, 3> stats{};
};

struct SweepReport {
    std::string parameter;
    std::vector<SweepPoint> points;
};

/// Names accepted by apply_override / SweepSpec::parameter.
std::vector<std::string> sweep_parameters();

/// Returns cfg with one numeric parameter replaced. Throws ConfigError for unknown names or values
/// the scenario cannot take.
ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& parameter, double value);

/// Runs cfg.trials trials at every grid value. All grid values are validated before any trial
/// runs. Every grid point reuses the same per-trial random streams, so points are paired.
SweepReport run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, unsigned threads);

}  // namespace jamloc
