// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <variant>

#include "jamloc/geometry.hpp"
#include "jamloc/rng.hpp"

namespace jamloc {

/// Log-distance path loss with log-normal shadowing. The shadowing term is
/// N(0, shadowing_std_db) in dB.
struct PathLossModel {
    double reference_distance_m = 1.0;
    double exponent = 2.0;
    double shadowing_std_db = 0.0;

    void validate() const;
};

/// Directional jammer antenna. Main-lobe loss follows cos^m(psi/2) in power, floored at
/// -dynamic_range_db.
struct AntennaPattern {
    Position3 boresight{-1.0, 0.0, 0.0};
    double dynamic_range_db = 20.0;
    double beam_exponent = 10.0;

    void validate() const;
    /// Off-boresight angle at which the gain is -3 dB.
    double half_power_angle() const;
};

namespace modulation {

struct Constant {
    double peak_dbm = 15.0;
};

/// Redrawn independently at every measurement instant.
struct RandomUniform {
    double low_dbm = 5.0;
    double high_dbm = 20.0;
};

enum class FrequencyJitter { None, UniformFactor };

/// mean + amplitude * sin(2*pi*t*b/period + phase). `frequency_factor` is b, resolved once per
/// trial when jitter is enabled (b ~ U(0, 2)); it stays 1 otherwise.
struct Sinusoidal {
    double mean_dbm = 12.5;
    double amplitude_db = 7.5;
    double period_s = 1.0;
    double phase_rad = 0.0;
    FrequencyJitter jitter = FrequencyJitter::None;
    double frequency_factor = 1.0;

    double effective_period() const { return period_s / frequency_factor; }
};

}  // namespace modulation

using ModulationScheme = std::variant<modulation::Constant, modulation::RandomUniform, modulation::Sinusoidal>;

void validate(const ModulationScheme& m);

struct JammerSpec {
    Position3 position;
    AntennaPattern antenna;
    ModulationScheme modulation = modulation::Constant{};
    int id = 0;
};

/// Transmit peak power of the jammer at time t. Only RandomUniform consumes the stream.
double peak_power_at(const JammerSpec& j, double t, Rng& rng);

/// Relative gain in dB toward `toward` (a vector from the antenna), in [-dynamic_range_db, 0].
/// Throws DomainError on a zero vector.
double antenna_gain_db(const AntennaPattern& a, const Position3& toward);

/// Received jammer power at rx. Draws one shadowing sample when shadowing_std_db > 0.
/// Throws DomainError when rx coincides with the jammer.
double received_power_dbm(const PathLossModel& model, const JammerSpec& j, const Position3& rx, double t, Rng& rng);

/// Received power with the transmit power and shadowing supplied by the caller.
double received_power_dbm(const PathLossModel& model, const JammerSpec& j, const Position3& rx, double peak_dbm,
                          double shadowing_db);

/// Jamming-to-signal ratio of the dominant jammer when the legitimate signal and all other jammers
/// count as interference: dominant - 10 log10(10^(signal/10) + sum 10^(other/10)).
/// With no other jammers this is dominant - signal. signal_dbm may be -infinity.
double effective_jsr_db(double dominant_dbm, std::span<const double> other_jammers_dbm, double signal_dbm);

}  // namespace jamloc
