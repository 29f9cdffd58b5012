// SPDX-License-Identifier: Apache-2.0
#include "jamloc/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jamloc/error.hpp"

namespace jamloc {

void Box::validate(const char* name) const {
    if (!is_finite(min) || !is_finite(max) || !(min.x < max.x) || !(min.y < max.y) || !(min.z < max.z)) {
        throw ConfigError(std::string(name) + ": box must be finite with min < max on every axis");
    }
}

bool Box::contains(const Position3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

Position3 Box::sample(Rng& rng) const {
    auto draw = [&rng](double lo, double hi) {
        return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    const double x = draw(min.x, max.x);
    const double y = draw(min.y, max.y);
    const double z = draw(min.z, max.z);
    return {x, y, z};
}

void AoaErrorModel::validate() const {
    if (!(sigma_min_deg2 >= 0.0) || !(sigma_max_deg2 >= sigma_min_deg2)) {
        throw ConfigError("aoa_error: need 0 <= sigma_min_deg2 <= sigma_max_deg2");
    }
    if (!(sigma_ref_deg2 >= 0.0) || !std::isfinite(jsr_ref_db)) throw ConfigError("aoa_error: bad reference point");
    if (!(slope >= 0.0)) throw ConfigError("aoa_error.slope must be >= 0 (error power may not grow with JSR)");
    if (!(scale >= 0.0)) throw ConfigError("aoa_error.scale must be >= 0");
}

double sigma_d_from_jsr(const AoaErrorModel& model, double jsr_db) {
    const double raw = model.sigma_ref_deg2 * std::pow(10.0, -model.slope * (jsr_db - model.jsr_ref_db) / 10.0);
    // NaN only arises from 0 * inf at infinite JSR with slope 0
    const double clamped = std::isnan(raw) ? model.sigma_ref_deg2 : std::clamp(raw, model.sigma_min_deg2, model.sigma_max_deg2);
    return model.scale * clamped;
}

namespace {

int choose_jammer(std::span<const double> powers, const AttributionMode& mode, Rng& rng) {
    if (std::holds_alternative<attribution::PhysicalDominant>(mode)) {
        return static_cast<int>(std::max_element(powers.begin(), powers.end()) - powers.begin());
    }
    const double p_a = std::get<attribution::DirectProbability>(mode).p_a;
    const auto m = static_cast<int>(powers.size());
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (m == 1 || u < p_a) return 0;
    // (1 - p_a) split evenly over the other jammers
    const double share = (1.0 - p_a) / (m - 1);
    const int k = 1 + static_cast<int>((u - p_a) / share);
    return std::min(k, m - 1);
}

}  // namespace

AoaSample synthesize_sample(std::span<const JammerSpec> jammers, const Position3& true_uav_pos, double t,
                            const NoiseParams& noise, const AttributionMode& mode, Rng& rng) {
    if (jammers.empty()) throw ConfigError("synthesize_sample: at least one jammer is required");
    if (const auto* d = std::get_if<attribution::DirectProbability>(&mode)) {
        const double lo = 1.0 / static_cast<double>(jammers.size());
        if (!(d->p_a >= lo - 1e-12) || !(d->p_a <= 1.0)) {
            throw ConfigError("attribution p_a must lie in [1/M, 1]");
        }
    }

    std::vector<double> powers;
    powers.reserve(jammers.size());
    for (const auto& j : jammers) powers.push_back(received_power_dbm(noise.path_loss, j, true_uav_pos, t, rng));

    const int chosen = choose_jammer(powers, mode, rng);
    std::vector<double> others;
    others.reserve(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (static_cast<int>(i) != chosen) others.push_back(powers[i]);
    }

    AoaSample s;
    s.time_s = t;
    s.attributed_jammer_id = jammers[static_cast<std::size_t>(chosen)].id;
    s.jsr_db = effective_jsr_db(powers[static_cast<std::size_t>(chosen)], others, noise.signal_power_dbm);

    const AnglePair truth = angles_from_direction(jammers[static_cast<std::size_t>(chosen)].position - true_uav_pos);
    const double std_rad = deg_to_rad(angle_error_std_deg(sigma_d_from_jsr(noise.aoa_error, s.jsr_db)));
    double az = truth.azimuth;
    double el = truth.elevation;
    if (std_rad > 0.0) {
        std::normal_distribution<double> e_d(0.0, std_rad);
        az += e_d(rng);
        el += e_d(rng);
    }
    s.angles = {wrap_azimuth(az), clamp_elevation(el)};

    s.reported_uav_position = true_uav_pos;
    const double std_p = position_error_std_m(noise.position_error_power);
    if (std_p > 0.0) {
        std::normal_distribution<double> e_p(0.0, std_p);
        s.reported_uav_position.x += e_p(rng);
        s.reported_uav_position.y += e_p(rng);
        s.reported_uav_position.z += e_p(rng);
    }
    return s;
}

void LeanSpec::validate() const {
    if (!(strong_offset_m >= 0.0) || !(slight_offset_m >= 0.0)) throw ConfigError("lean offsets must be >= 0");
    if (!(half_extent_m > 0.0)) throw ConfigError("lean.half_extent_m must be > 0");
}

std::vector<Position3> sample_trajectory(const Box& area, int n, const LeanSpec& lean, const Position3& jammer_a,
                                         Rng& rng) {
    if (n < 2) throw ConfigError("sample_trajectory: at least 2 waypoints are required");
    Box box = area;
    if (lean.kind != LeanKind::None) {
        const double offset = lean.kind == LeanKind::Strong ? lean.strong_offset_m : lean.slight_offset_m;
        const double heading = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
        const double cx = jammer_a.x + offset * std::cos(heading);
        const double cy = jammer_a.y + offset * std::sin(heading);
        box.min.x = std::max(area.min.x, cx - lean.half_extent_m);
        box.max.x = std::min(area.max.x, cx + lean.half_extent_m);
        box.min.y = std::max(area.min.y, cy - lean.half_extent_m);
        box.max.y = std::min(area.max.y, cy + lean.half_extent_m);
        if (!(box.min.x < box.max.x) || !(box.min.y < box.max.y)) {
            throw ConfigError("sample_trajectory: lean box does not intersect the cruising area");
        }
    }
    std::vector<Position3> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(box.sample(rng));
    return out;
}

}  // namespace jamloc
