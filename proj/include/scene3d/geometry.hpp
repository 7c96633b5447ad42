#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <limits>

namespace scene3d {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Axis-aligned box accumulated from points. Empty until the first expand().
struct Aabb {
    Vec3 min{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
             std::numeric_limits<double>::max()};
    Vec3 max{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::lowest()};

    bool empty() const { return min.x() > max.x(); }

    void expand(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }

    void merge(const Aabb& other) {
        if (other.empty()) return;
        expand(other.min);
        expand(other.max);
    }

    void inflate(const Vec3& r) {
        min -= r;
        max += r;
    }

    bool contains(const Vec3& p) const {
        return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
               p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
    }

    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 size() const { return max - min; }
};

/// Geodesic angle between two unit quaternions, in degrees (0..180).
inline double quat_angle_deg(const Quat& a, const Quat& b) {
    double d = std::abs(a.dot(b));
    if (d > 1.0) d = 1.0;
    return rad_to_deg(2.0 * std::acos(d));
}

}  // namespace scene3d
