// SPDX-License-Identifier: Apache-2.0
#include "jamloc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "jamloc/error.hpp"

namespace jamloc {

namespace {

// Sub-stream indices within one trial's stream.
constexpr std::uint64_t kScenarioStream = 0;
constexpr std::uint64_t kTrajectoryStream = 1;
constexpr std::uint64_t kFirstSampleStream = 2;

std::size_t method_index(Method m) { return static_cast<std::size_t>(m); }

const modulation::Sinusoidal* first_sinusoid(const ScenarioConfig& cfg) {
    for (const auto& j : cfg.jammers) {
        if (const auto* s = std::get_if<modulation::Sinusoidal>(&j.modulation)) return s;
    }
    return nullptr;
}

}  // namespace

void ScenarioConfig::validate() const {
    cruising_area.validate("cruising_area");
    jammer_area.validate("jammer_area");
    if (jammers.empty()) throw ConfigError("jammers: at least one jammer is required");
    for (std::size_t i = 0; i < jammers.size(); ++i) {
        const auto& j = jammers[i];
        if (j.position && !is_finite(*j.position)) throw ConfigError("jammers[" + std::to_string(i) + "].position must be finite");
        if (!std::isfinite(j.boresight.azimuth) || !std::isfinite(j.boresight.elevation) ||
            std::abs(j.boresight.elevation) >= std::numbers::pi / 2.0) {
            throw ConfigError("jammers[" + std::to_string(i) + "].boresight is invalid");
        }
        try {
            jamloc::validate(j.modulation);
        } catch (const ConfigError& e) {
            throw ConfigError("jammers[" + std::to_string(i) + "]: " + e.what());
        }
    }
    if (!std::isfinite(peak_power_min_dbm) || !std::isfinite(peak_power_max_dbm) || peak_power_min_dbm > peak_power_max_dbm) {
        throw ConfigError("peak_power_range_dbm: need finite min <= max");
    }
    if (std::isnan(signal_power_dbm) || signal_power_dbm == std::numeric_limits<double>::infinity()) {
        throw ConfigError("signal_power_dbm must be finite or -inf");
    }
    if (n_samples < 3) throw ConfigError("n_samples must be >= 3 (the pruning localizer needs 3 samples)");
    path_loss.validate();
    AntennaPattern{{-1.0, 0.0, 0.0}, antenna_dynamic_range_db, antenna_beam_exponent}.validate();
    aoa_error.validate();
    if (!(position_error_power >= 0.0)) throw ConfigError("position_error_power must be >= 0");
    if (const auto* d = std::get_if<attribution::DirectProbability>(&attribution)) {
        const double lo = 1.0 / static_cast<double>(jammers.size());
        if (!(d->p_a >= lo - 1e-12 && d->p_a <= 1.0)) {
            throw ConfigError("attribution.p_a = " + std::to_string(d->p_a) + " lies outside [1/M, 1] for M = " +
                              std::to_string(jammers.size()));
        }
    }
    lean.validate();
    if (!(measurement_window_s >= 0.0) || !std::isfinite(measurement_window_s)) {
        throw ConfigError("measurement_window_s must be finite and >= 0");
    }
    if (!(start_span_s >= 0.0) || !std::isfinite(start_span_s)) throw ConfigError("start_span_s must be finite and >= 0");
    spgd.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
}

NoiseParams ScenarioConfig::noise() const { return {path_loss, aoa_error, signal_power_dbm, position_error_power}; }

TrialScenario simulate_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    const std::uint64_t trial_seed = derive_seed(cfg.master_seed, trial_index);
    Rng scenario_rng = make_stream(trial_seed, kScenarioStream);

    // A fixed number of draws per jammer keeps the streams aligned across configurations.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TrialScenario out;
    double frequency_factor = 0.0;
    while (frequency_factor == 0.0) frequency_factor = 2.0 * unit(scenario_rng);
    for (std::size_t i = 0; i < cfg.jammers.size(); ++i) {
        const JammerTemplate& tpl = cfg.jammers[i];
        const Position3 drawn = cfg.jammer_area.sample(scenario_rng);
        const double peak = cfg.peak_power_min_dbm + (cfg.peak_power_max_dbm - cfg.peak_power_min_dbm) * unit(scenario_rng);

        JammerSpec j;
        j.id = static_cast<int>(i);
        j.position = tpl.position.value_or(drawn);
        j.antenna = {direction_from_angles(tpl.boresight), cfg.antenna_dynamic_range_db, cfg.antenna_beam_exponent};
        j.modulation = tpl.modulation;
        if (auto* c = std::get_if<modulation::Constant>(&j.modulation); c && tpl.random_peak) c->peak_dbm = peak;
        // One modulation clock per trial, shared by all jammers so their phase offset is preserved.
        if (auto* s = std::get_if<modulation::Sinusoidal>(&j.modulation);
            s && s->jitter == modulation::FrequencyJitter::UniformFactor) {
            s->frequency_factor = frequency_factor;
        }
        out.jammers.push_back(j);
    }
    out.window_start_s = cfg.start_span_s * unit(scenario_rng);

    Rng trajectory_rng = make_stream(trial_seed, kTrajectoryStream);
    out.true_uav_positions =
        sample_trajectory(cfg.cruising_area, cfg.n_samples, cfg.lean, out.jammers.front().position, trajectory_rng);

    const NoiseParams noise = cfg.noise();
    const double spacing = cfg.measurement_window_s / static_cast<double>(cfg.n_samples);
    out.samples.reserve(out.true_uav_positions.size());
    for (std::size_t k = 0; k < out.true_uav_positions.size(); ++k) {
        Rng sample_rng = make_stream(trial_seed, kFirstSampleStream + k);
        const double t = out.window_start_s + (static_cast<double>(k) + 0.5) * spacing;
        out.samples.push_back(
            synthesize_sample(out.jammers, out.true_uav_positions[k], t, noise, cfg.attribution, sample_rng));
    }
    return out;
}

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    TrialResult r;
    r.trial_index = trial_index;
    TrialScenario sc;
    try {
        sc = simulate_trial(cfg, trial_index);
    } catch (const DomainError& e) {
        r.failed = true;
        r.failure = e.what();
        return r;
    }

    std::vector<int> counts(sc.jammers.size(), 0);
    for (const auto& s : sc.samples) ++counts[static_cast<std::size_t>(s.attributed_jammer_id)];
    r.target_jammer = cfg.target == ErrorTarget::Majority
                          ? static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin())
                          : 0;
    r.samples_from_target = counts[static_cast<std::size_t>(r.target_jammer)];
    r.true_position = sc.jammers[static_cast<std::size_t>(r.target_jammer)].position;

    try {
        r.estimates[method_index(Method::LSE)] = lse(sc.samples);
        r.estimates[method_index(Method::WLSE)] = wlse(sc.samples, cfg.path_loss.exponent);
        r.estimates[method_index(Method::SPGD)] = spgd(sc.samples, cfg.spgd);
    } catch (const SingularGeometryError& e) {
        r.failed = true;
        r.failure = e.what();
        return r;
    }
    for (std::size_t m = 0; m < 3; ++m) r.errors[m] = distance(r.estimates[m].position, r.true_position);
    return r;
}

std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialResult> results(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = run_trial(cfg, i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next = n;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

std::array<MethodStats, 3> aggregate_errors(std::span<const TrialResult> results, ErrorMetric metric) {
    std::vector<const TrialResult*> ordered;
    ordered.reserve(results.size());
    int failures = 0;
    for (const auto& r : results) {
        if (r.failed) {
            ++failures;
        } else {
            ordered.push_back(&r);
        }
    }
    if (ordered.empty()) throw EmptyReportError("aggregate_errors: no successful trials");
    std::sort(ordered.begin(), ordered.end(),
              [](const TrialResult* a, const TrialResult* b) { return a->trial_index < b->trial_index; });

    std::array<MethodStats, 3> out{};
    const double n = static_cast<double>(ordered.size());
    for (Method method : kAllMethods) {
        const std::size_t m = method_index(method);
        // Accumulate the per-trial quantity q (squared error for RMSE, error for MAE) in index order.
        double sum = 0.0;
        double sum_sq = 0.0;
        for (const TrialResult* r : ordered) {
            const double q = metric == ErrorMetric::Rmse ? r->errors[m] * r->errors[m] : r->errors[m];
            sum += q;
            sum_sq += q * q;
        }
        const double mean = sum / n;
        const double var = ordered.size() > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
        const double se = std::sqrt(var / n);

        MethodStats& s = out[m];
        s.method = method;
        s.trials = static_cast<int>(results.size());
        s.failures = failures;
        if (metric == ErrorMetric::Rmse) {
            s.error_m = std::sqrt(mean);
            s.ci95_m = s.error_m > 0.0 ? 1.96 * se / (2.0 * s.error_m) : 0.0;
        } else {
            s.error_m = mean;
            s.ci95_m = 1.96 * se;
        }
    }
    return out;
}

double failure_rate(std::span<const TrialResult> results) {
    if (results.empty()) return 0.0;
    const auto failed = std::count_if(results.begin(), results.end(), [](const TrialResult& r) { return r.failed; });
    return static_cast<double>(failed) / static_cast<double>(results.size());
}

std::vector<std::string> sweep_parameters() {
    return {"max_power_dbm",   "n_samples",    "p_a",        "phase_rad",        "tm_over_t",
            "aoa_error_scale", "shadowing_std_db", "position_error_power", "measurement_window_s", "signal_power_dbm"};
}

ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& parameter, double value) {
    if (!std::isfinite(value)) throw ConfigError(parameter + ": value must be finite");
    ScenarioConfig out = cfg;
    if (parameter == "max_power_dbm") {
        bool any = false;
        for (auto& j : out.jammers) {
            if (auto* c = std::get_if<modulation::Constant>(&j.modulation)) {
                c->peak_dbm = value;
                j.random_peak = false;
                any = true;
            }
        }
        if (!any) throw ConfigError("max_power_dbm: no jammer uses constant modulation");
    } else if (parameter == "n_samples") {
        if (value != std::floor(value)) throw ConfigError("n_samples must be an integer");
        out.n_samples = static_cast<int>(value);
    } else if (parameter == "p_a") {
        out.attribution = attribution::DirectProbability{value};
    } else if (parameter == "phase_rad") {
        // Phase of every jammer after the first, relative to jammer A.
        bool any = false;
        for (std::size_t i = 1; i < out.jammers.size(); ++i) {
            if (auto* s = std::get_if<modulation::Sinusoidal>(&out.jammers[i].modulation)) {
                s->phase_rad = value;
                any = true;
            }
        }
        if (!any) throw ConfigError("phase_rad: needs a sinusoidal jammer besides jammer A");
    } else if (parameter == "tm_over_t") {
        const auto* s = first_sinusoid(out);
        if (s == nullptr) throw ConfigError("tm_over_t: needs a sinusoidal jammer to define the period");
        if (!(value >= 0.0)) throw ConfigError("tm_over_t must be >= 0");
        out.measurement_window_s = value * s->period_s;
    } else if (parameter == "aoa_error_scale") {
        out.aoa_error.scale = value;
    } else if (parameter == "shadowing_std_db") {
        out.path_loss.shadowing_std_db = value;
    } else if (parameter == "position_error_power") {
        out.position_error_power = value;
    } else if (parameter == "measurement_window_s") {
        out.measurement_window_s = value;
    } else if (parameter == "signal_power_dbm") {
        out.signal_power_dbm = value;
    } else {
        throw ConfigError("unknown sweep parameter '" + parameter + "'");
    }
    out.validate();
    return out;
}

SweepReport run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, unsigned threads) {
    if (sweep.values.empty()) throw ConfigError("sweep '" + sweep.parameter + "': grid is empty");
    std::vector<ScenarioConfig> configs;
    configs.reserve(sweep.values.size());
    for (double v : sweep.values) configs.push_back(apply_override(cfg, sweep.parameter, v));

    SweepReport report{sweep.parameter, {}};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto results = run_trials(configs[i], threads);
        report.points.push_back({sweep.values[i], aggregate_errors(results, configs[i].metric)});
    }
    return report;
}

}  // namespace jamloc
