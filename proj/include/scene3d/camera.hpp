#pragma once

#include <optional>
#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

/// Pinhole camera. Camera frame: x right, y down, z forward (optical axis).
/// All lengths in centimeters, all pixel quantities in pixels.
struct CameraModel {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    /// Square pixels, principal point at the image center.
    static CameraModel from_vertical_fov(int width, int height, double fov_v_deg);

    Vec2 project(const Vec3& p) const {
        return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
    }

    /// Depth is the perpendicular distance to the camera plane (the camera-frame
    /// z coordinate), not the ray length.
    Vec3 backproject(double u, double v, double depth) const {
        return {(u - cx) * depth / fx, (v - cy) * depth / fy, depth};
    }

    bool in_image(double u, double v) const {
        return u >= 0.0 && u < width && v >= 0.0 && v < height;
    }
};

/// Per-pixel depth in cm, perpendicular distance to the camera plane.
/// A value of zero means "no measurement" at that pixel.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major, width * height

    DepthMap() = default;
    DepthMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

    double at(int u, int v) const { return values[static_cast<size_t>(v) * width + u]; }
    double& at(int u, int v) { return values[static_cast<size_t>(v) * width + u]; }
};

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit
};

/// Finite rectangular plane patch. u_axis/v_axis span the rectangle; they are
/// derived from the normal unless supplied explicitly.
struct Plane3D {
    Vec3 point;
    Vec3 normal;  // unit
    double half_width = 0.0;
    double half_height = 0.0;
    Vec3 u_axis;
    Vec3 v_axis;

    static Plane3D make(const Vec3& point, const Vec3& normal, double half_width,
                        double half_height);
    static Plane3D make_with_axes(const Vec3& point, const Vec3& normal, double half_width,
                                  double half_height, const Vec3& u_axis, const Vec3& v_axis);
};

struct Extents {
    Vec3 min;
    Vec3 max;

    Vec3 size() const { return max - min; }
    double diagonal() const { return (max - min).norm(); }
};

/// f = H / (2 tan(fov_v / 2)). Throws std::domain_error unless 0 < fov < 180.
double focal_from_fov(double height_px, double fov_v_deg);

/// Axis-wise min/max of the backprojected point cloud over all pixels with
/// nonzero depth. Throws if no pixel carries depth.
Extents scene_extents(const CameraModel& cam, const DepthMap& depth);

/// Plane orthogonal to the optical axis at the given depth, sized to fill the
/// view frustum exactly, normal facing the camera.
Plane3D background_plane_placement(const CameraModel& cam, double max_depth);

/// Intersection point if the ray meets the plane at t >= 0 within the half
/// extents; nullopt otherwise (including parallel rays).
std::optional<Vec3> ray_plane_intersect(const Ray& ray, const Plane3D& plane);

}  // namespace scene3d
