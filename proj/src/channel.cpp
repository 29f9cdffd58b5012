// SPDX-License-Identifier: Apache-2.0
#include "jamloc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jamloc/error.hpp"

namespace jamloc {

void PathLossModel::validate() const {
    if (!(reference_distance_m > 0.0)) throw ConfigError("path_loss.reference_distance_m must be > 0");
    if (!(exponent > 0.0)) throw ConfigError("path_loss.exponent must be > 0");
    if (!(shadowing_std_db >= 0.0)) throw ConfigError("path_loss.shadowing_std_db must be >= 0");
}

void AntennaPattern::validate() const {
    if (!(dynamic_range_db > 0.0)) throw ConfigError("antenna.dynamic_range_db must be > 0");
    if (!(beam_exponent > 0.0)) throw ConfigError("antenna.beam_exponent must be > 0");
    if (!(norm(boresight) > 0.0) || !is_finite(boresight)) throw ConfigError("antenna boresight must be nonzero");
}

double AntennaPattern::half_power_angle() const {
    // cos^m(psi/2) = 10^(-0.3)
    return 2.0 * std::acos(std::pow(10.0, -0.3 / beam_exponent));
}

namespace {

struct Validator {
    void operator()(const modulation::Constant& c) const {
        if (!std::isfinite(c.peak_dbm)) throw ConfigError("constant modulation: peak_dbm must be finite");
    }
    void operator()(const modulation::RandomUniform& r) const {
        if (!std::isfinite(r.low_dbm) || !std::isfinite(r.high_dbm) || r.low_dbm > r.high_dbm) {
            throw ConfigError("random_uniform modulation: need finite low_dbm <= high_dbm");
        }
    }
    void operator()(const modulation::Sinusoidal& s) const {
        if (!(s.amplitude_db >= 0.0)) throw ConfigError("sinusoidal modulation: amplitude_db must be >= 0");
        if (!(s.period_s > 0.0)) throw ConfigError("sinusoidal modulation: period_s must be > 0");
        if (!(s.frequency_factor > 0.0)) throw ConfigError("sinusoidal modulation: frequency factor must be > 0");
        if (!std::isfinite(s.mean_dbm) || !std::isfinite(s.phase_rad)) {
            throw ConfigError("sinusoidal modulation: mean_dbm and phase must be finite");
        }
    }
};

}  // namespace

void validate(const ModulationScheme& m) { std::visit(Validator{}, m); }

double peak_power_at(const JammerSpec& j, double t, Rng& rng) {
    if (const auto* c = std::get_if<modulation::Constant>(&j.modulation)) return c->peak_dbm;
    if (const auto* r = std::get_if<modulation::RandomUniform>(&j.modulation)) {
        if (r->low_dbm == r->high_dbm) return r->low_dbm;
        return std::uniform_real_distribution<double>(r->low_dbm, r->high_dbm)(rng);
    }
    const auto& s = std::get<modulation::Sinusoidal>(j.modulation);
    return s.mean_dbm + s.amplitude_db * std::sin(2.0 * std::numbers::pi * t / s.effective_period() + s.phase_rad);
}

double antenna_gain_db(const AntennaPattern& a, const Position3& toward) {
    if (!(norm(toward) > 0.0)) throw DomainError("antenna_gain_db: zero direction");
    const double psi = angle_between(a.boresight, toward);
    const double floor = std::pow(10.0, -a.dynamic_range_db / 10.0);
    const double lobe = std::pow(std::cos(psi / 2.0), a.beam_exponent);
    return std::max(10.0 * std::log10(std::max(lobe, floor)), -a.dynamic_range_db);
}

double received_power_dbm(const PathLossModel& model, const JammerSpec& j, const Position3& rx, double peak_dbm,
                          double shadowing_db) {
    const Position3 offset = rx - j.position;
    const double d = norm(offset);
    if (!(d > 0.0)) throw DomainError("received_power_dbm: receiver coincides with jammer");
    return peak_dbm + antenna_gain_db(j.antenna, offset) -
           10.0 * model.exponent * std::log10(d / model.reference_distance_m) + shadowing_db;
}

double received_power_dbm(const PathLossModel& model, const JammerSpec& j, const Position3& rx, double t, Rng& rng) {
    if (!(distance(rx, j.position) > 0.0)) throw DomainError("received_power_dbm: receiver coincides with jammer");
    const double peak = peak_power_at(j, t, rng);
    double shadowing = 0.0;
    if (model.shadowing_std_db > 0.0) {
        shadowing = std::normal_distribution<double>(0.0, model.shadowing_std_db)(rng);
    }
    return received_power_dbm(model, j, rx, peak, shadowing);
}

double effective_jsr_db(double dominant_dbm, std::span<const double> other_jammers_dbm, double signal_dbm) {
    if (other_jammers_dbm.empty()) return dominant_dbm - signal_dbm;
    double ref = signal_dbm;
    for (double o : other_jammers_dbm) ref = std::max(ref, o);
    if (ref == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
    // Sum in the linear domain relative to the strongest interferer.
    double acc = std::pow(10.0, (signal_dbm - ref) / 10.0);
    for (double o : other_jammers_dbm) acc += std::pow(10.0, (o - ref) / 10.0);
    return dominant_dbm - (ref + 10.0 * std::log10(acc));
}

}  // namespace jamloc
