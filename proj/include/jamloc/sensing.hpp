// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <variant>
#include <vector>

#include "jamloc/channel.hpp"
#include "jamloc/geometry.hpp"
#include "jamloc/rng.hpp"

namespace jamloc {

/// Axis-aligned box, meters.
struct Box {
    Position3 min;
    Position3 max;

    void validate(const char* name) const;
    Position3 center() const { return (min + max) * 0.5; }
    bool contains(const Position3& p) const;
    Position3 sample(Rng& rng) const;
};

/// JSR -> AoA error power (deg^2): clamp(ref * 10^(-slope (jsr - jsr_ref) / 10), min, max).
struct AoaErrorModel {
    double sigma_ref_deg2 = 1.0;
    double jsr_ref_db = 10.0;
    double slope = 1.0;
    double sigma_min_deg2 = 0.01;
    double sigma_max_deg2 = 100.0;
    /// Multiplies the whole curve; 0 disables angular noise.
    double scale = 1.0;

    void validate() const;
};

double sigma_d_from_jsr(const AoaErrorModel& model, double jsr_db);

/// Standard deviation (degrees) of the per-angle error for error power sigma_d: sqrt(sigma_d) / 2.
inline double angle_error_std_deg(double sigma_d_deg2) { return std::sqrt(sigma_d_deg2) / 2.0; }

/// Standard deviation (m) of the per-coordinate UAV position error for error power sigma_p.
inline double position_error_std_m(double sigma_p) { return std::sqrt(sigma_p) / 3.0; }

namespace attribution {
/// The strongest received jammer is the one whose bearing is measured.
struct PhysicalDominant {};
/// Jammer 0 is measured with probability p_a, each other jammer with (1 - p_a) / (M - 1).
struct DirectProbability {
    double p_a = 1.0;
};
}  // namespace attribution

using AttributionMode = std::variant<attribution::PhysicalDominant, attribution::DirectProbability>;

struct NoiseParams {
    PathLossModel path_loss;
    AoaErrorModel aoa_error;
    double signal_power_dbm = -15.0;
    double position_error_power = 3.0;
};

struct AoaSample {
    Position3 reported_uav_position;
    AnglePair angles;
    double jsr_db = 0.0;
    double time_s = 0.0;
    /// Simulation ground truth; localizers never read it.
    int attributed_jammer_id = 0;
};

/// One noisy bearing measurement taken from true_uav_pos at time t.
/// Throws DomainError if the UAV coincides with a jammer, ConfigError on an empty jammer list or a
/// p_a outside [1/M, 1].
AoaSample synthesize_sample(std::span<const JammerSpec> jammers, const Position3& true_uav_pos, double t,
                            const NoiseParams& noise, const AttributionMode& mode, Rng& rng);

enum class LeanKind { None, Strong, Slight };

/// Where the UAV cruises relative to jammer A. With a lean, waypoints are drawn from a box of
/// horizontal half-width half_extent_m whose center sits at the given horizontal distance from
/// jammer A in a random direction; the box is intersected with the cruising area.
struct LeanSpec {
    LeanKind kind = LeanKind::None;
    double strong_offset_m = 5.0;
    double slight_offset_m = 25.0;
    double half_extent_m = 10.0;

    void validate() const;
};

/// n waypoints. Throws ConfigError when n < 2.
std::vector<Position3> sample_trajectory(const Box& area, int n, const LeanSpec& lean, const Position3& jammer_a,
                                         Rng& rng);

}  // namespace jamloc
