#include "mssg/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mssg {

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double d1 = (p2 - p1).cross(q1 - p1);
    const double d2 = (p2 - p1).cross(q2 - p1);
    const double d3 = (q2 - q1).cross(p1 - q1);
    const double d4 = (q2 - q1).cross(p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Convex polygon, vertices counter-clockwise.
bool inside_convex(const Vec2& p, std::span<const Vec2> poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        if ((b - a).cross(p - a) < 0.0) return false;
    }
    return true;
}

double interval_gap(double lo_a, double hi_a, double lo_b, double hi_b) {
    return std::max({0.0, lo_b - hi_a, lo_a - hi_b});
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::array<Vec2, 4> footprint_corners(const Vec2& center, const Vec2& half_extents, double yaw) {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    const std::array<Vec2, 4> local{{{half_extents.x, half_extents.y},
                                     {-half_extents.x, half_extents.y},
                                     {-half_extents.x, -half_extents.y},
                                     {half_extents.x, -half_extents.y}}};
    std::array<Vec2, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = {center.x + c * local[i].x - s * local[i].y, center.y + s * local[i].x + c * local[i].y};
    }
    return out;
}

Vec3 OrientedBox::to_local(const Vec3& p) const {
    const Vec3 d = p - center;
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {c * d.x + s * d.y, -s * d.x + c * d.y, d.z};
}

bool OrientedBox::contains_xy(const Vec3& p) const {
    const Vec3 l = to_local(p);
    return std::abs(l.x) <= half_extents.x && std::abs(l.y) <= half_extents.y;
}

double OrientedBox::distance_to(const Vec3& p) const {
    const Vec3 l = to_local(p);
    const double dx = std::max(0.0, std::abs(l.x) - half_extents.x);
    const double dy = std::max(0.0, std::abs(l.y) - half_extents.y);
    const double dz = std::max(0.0, std::abs(l.z) - half_extents.z);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double OrientedBox::distance_to(const OrientedBox& other) const {
    // Both boxes are vertical prisms, so the horizontal and vertical
    // separations combine orthogonally.
    const auto a = footprint_corners(drop_gravity(center), {half_extents.x, half_extents.y}, yaw);
    const auto b = footprint_corners(drop_gravity(other.center), {other.half_extents.x, other.half_extents.y},
                                     other.yaw);
    const double dxy = polygon_distance(a, b);
    const double dz = interval_gap(center.z - half_extents.z, center.z + half_extents.z,
                                   other.center.z - other.half_extents.z, other.center.z + other.half_extents.z);
    return std::sqrt(dxy * dxy + dz * dz);
}

double polygon_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    if (inside_convex(a.front(), b) || inside_convex(b.front(), a)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec2& a0 = a[i];
        const Vec2& a1 = a[(i + 1) % a.size()];
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Vec2& b0 = b[j];
            const Vec2& b1 = b[(j + 1) % b.size()];
            if (segments_intersect(a0, a1, b0, b1)) return 0.0;
            best = std::min({best, point_segment_distance(a0, b0, b1), point_segment_distance(b0, a0, a1)});
        }
    }
    return best;
}

Vec3 mean_point(std::span<const Vec3> points) {
    Vec3 sum;
    for (const auto& p : points) sum = sum + p;
    return points.empty() ? sum : sum * (1.0 / static_cast<double>(points.size()));
}

Vec3 median_point(std::span<const Vec3> points) {
    if (points.empty()) return {};
    std::vector<double> xs, ys, zs;
    for (const auto& p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
        zs.push_back(p.z);
    }
    return {median_of(std::move(xs)), median_of(std::move(ys)), median_of(std::move(zs))};
}

}  // namespace mssg
