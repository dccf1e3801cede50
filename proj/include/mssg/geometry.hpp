#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace mssg {

/// Room frame: right-handed, +z is up (gravity axis), units are meters.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 drop_gravity(const Vec3& p) { return {p.x, p.y}; }

/// Floor-plane corners of a box rotated by `yaw` about +z, counter-clockwise.
std::array<Vec2, 4> footprint_corners(const Vec2& center, const Vec2& half_extents, double yaw);

/// Box with a yaw-only orientation: a rectangle on the floor extruded along z.
struct OrientedBox {
    Vec3 center;
    Vec3 half_extents;
    double yaw = 0.0;

    /// Point expressed in the box's local (unrotated) frame.
    Vec3 to_local(const Vec3& p) const;
    bool contains_xy(const Vec3& p) const;
    double distance_to(const Vec3& p) const;
    double distance_to(const OrientedBox& other) const;
};

/// Distance between two convex polygons (0 when they overlap).
double polygon_distance(std::span<const Vec2> a, std::span<const Vec2> b);

Vec3 mean_point(std::span<const Vec3> points);

/// Per-axis median; the mean of the two middle values for even counts.
Vec3 median_point(std::span<const Vec3> points);

}  // namespace mssg
