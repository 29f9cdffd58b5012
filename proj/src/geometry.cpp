// SPDX-License-Identifier: Apache-2.0
#include "jamloc/geometry.hpp"

#include <algorithm>

#include "jamloc/error.hpp"

namespace jamloc {

namespace {
constexpr double kPi = std::numbers::pi;
}

Position3 direction_from_angles(const AnglePair& a) {
    const double ce = std::cos(a.elevation);
    return {std::cos(a.azimuth) * ce, std::sin(a.azimuth) * ce, std::sin(a.elevation)};
}

AnglePair angles_from_direction(const Position3& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("angles_from_direction: zero or non-finite direction vector");
    }
    const double horizontal = std::hypot(v.x, v.y);
    if (horizontal == 0.0) {
        return {0.0, v.z > 0.0 ? kMaxElevation : -kMaxElevation};
    }
    return {wrap_azimuth(std::atan2(v.y, v.x)), clamp_elevation(std::atan2(v.z, horizontal))};
}

std::pair<Position3, Position3> orthogonal_vectors(const AnglePair& a) {
    const double sa = std::sin(a.azimuth);
    const double ca = std::cos(a.azimuth);
    const double se = std::sin(a.elevation);
    const double ce = std::cos(a.elevation);
    return {{-sa, ca, 0.0}, {ca * se, sa * se, -ce}};
}

double wrap_azimuth(double raw) {
    if (raw > -kPi && raw <= kPi) return raw;
    double r = std::fmod(raw + kPi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    const double out = r - kPi;
    return out <= -kPi ? kPi : out;
}

double clamp_elevation(double raw) { return std::clamp(raw, -kMaxElevation, kMaxElevation); }

double angle_between(const Position3& a, const Position3& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (!(na > 0.0) || !(nb > 0.0)) throw DomainError("angle_between: zero-length vector");
    // atan2 form stays accurate near 0 and pi where acos loses precision.
    const Position3 c{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    return std::atan2(norm(c), dot(a, b));
}

}  // namespace jamloc
