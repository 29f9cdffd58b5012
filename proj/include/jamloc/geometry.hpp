// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <utility>

namespace jamloc {

/// A point or vector in the local Cartesian frame, meters.
struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Position3& operator+=(const Position3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Position3& operator-=(const Position3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Position3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Position3 operator+(Position3 a, const Position3& b) { return a += b; }
    friend constexpr Position3 operator-(Position3 a, const Position3& b) { return a -= b; }
    friend constexpr Position3 operator*(Position3 a, double s) { return a *= s; }
    friend constexpr Position3 operator*(double s, Position3 a) { return a *= s; }
    friend constexpr bool operator==(const Position3&, const Position3&) = default;
};

constexpr double dot(const Position3& a, const Position3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Position3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Position3& a, const Position3& b) { return norm(a - b); }
inline bool is_finite(const Position3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

/// Azimuth in (-pi, pi], elevation in the open interval (-pi/2, pi/2). Radians.
struct AnglePair {
    double azimuth = 0.0;
    double elevation = 0.0;
};

// Elevation is kept this far away from the poles, where azimuth is undefined.
inline constexpr double kPoleMargin = 1e-9;
inline constexpr double kMaxElevation = std::numbers::pi / 2.0 - kPoleMargin;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Unit line-of-bearing vector [cos az cos el, sin az cos el, sin el].
/// Throughout the library this is the direction from the receiver toward the source.
Position3 direction_from_angles(const AnglePair& a);

/// Inverse of direction_from_angles. Throws DomainError on a zero or non-finite vector.
/// Elevation is clamped to +-kMaxElevation; at the pole the azimuth is reported as 0.
AnglePair angles_from_direction(const Position3& v);

/// The two unit vectors spanning the plane orthogonal to the bearing:
/// o1 = [-sin az, cos az, 0], o2 = [cos az sin el, sin az sin el, -cos el].
std::pair<Position3, Position3> orthogonal_vectors(const AnglePair& a);

/// Maps any finite angle into (-pi, pi].
double wrap_azimuth(double raw);

/// Clamps elevation into [-kMaxElevation, kMaxElevation].
double clamp_elevation(double raw);

/// Angle between two nonzero vectors, in [0, pi]. Throws DomainError on zero input.
double angle_between(const Position3& a, const Position3& b);

}  // namespace jamloc
