#include "scene3d/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace scene3d {

double focal_from_fov(double height_px, double fov_v_deg) {
    if (!(fov_v_deg > 0.0 && fov_v_deg < 180.0))
        throw std::domain_error("vertical FOV must lie in (0, 180) degrees");
    if (!(height_px > 0.0)) throw std::domain_error("image height must be positive");
    return height_px / (2.0 * std::tan(deg_to_rad(fov_v_deg) / 2.0));
}

CameraModel CameraModel::from_vertical_fov(int width, int height, double fov_v_deg) {
    if (width <= 0 || height <= 0) throw std::domain_error("image dimensions must be positive");
    const double f = focal_from_fov(height, fov_v_deg);
    return {f, f, width / 2.0, height / 2.0, width, height};
}

Plane3D Plane3D::make(const Vec3& point, const Vec3& normal, double half_width,
                      double half_height) {
    const Vec3 n = normal.normalized();
    // Pick the world axis least aligned with the normal to seed the in-plane frame.
    Vec3 ref = std::abs(n.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    Vec3 u = (ref - n * ref.dot(n)).normalized();
    Vec3 v = n.cross(u);
    return make_with_axes(point, n, half_width, half_height, u, v);
}

Plane3D Plane3D::make_with_axes(const Vec3& point, const Vec3& normal, double half_width,
                                double half_height, const Vec3& u_axis, const Vec3& v_axis) {
    if (!(half_width > 0.0 && half_height > 0.0))
        throw std::domain_error("plane half extents must be positive");
    Plane3D p;
    p.point = point;
    p.normal = normal.normalized();
    p.half_width = half_width;
    p.half_height = half_height;
    p.u_axis = u_axis.normalized();
    p.v_axis = v_axis.normalized();
    return p;
}

Extents scene_extents(const CameraModel& cam, const DepthMap& depth) {
    if (depth.width != cam.width || depth.height != cam.height)
        throw std::invalid_argument("depth map dimensions do not match the camera");
    Aabb box;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            const double d = depth.at(u, v);
            if (d <= 0.0) continue;  // zero depth = no measurement
            box.expand(cam.backproject(u, v, d));
        }
    }
    if (box.empty()) throw std::runtime_error("degenerate extents: depth map has no valid pixels");
    return {box.min, box.max};
}

Plane3D background_plane_placement(const CameraModel& cam, double max_depth) {
    if (!(max_depth > 0.0)) throw std::domain_error("background depth must be positive");
    const double hw = max_depth * (cam.width / 2.0) / cam.fx;
    const double hh = max_depth * (cam.height / 2.0) / cam.fy;
    // Normal faces back toward the camera; in-plane axes follow image x/y so the
    // frustum corners land exactly on the plane corners.
    return Plane3D::make_with_axes(Vec3(0, 0, max_depth), Vec3(0, 0, -1), hw, hh,
                                   Vec3(1, 0, 0), Vec3(0, 1, 0));
}

std::optional<Vec3> ray_plane_intersect(const Ray& ray, const Plane3D& plane) {
    const double denom = ray.direction.dot(plane.normal);
    if (std::abs(denom) < 1e-12) return std::nullopt;  // parallel
    const double t = (plane.point - ray.origin).dot(plane.normal) / denom;
    if (t < 0.0) return std::nullopt;
    const Vec3 p = ray.origin + t * ray.direction;
    const Vec3 rel = p - plane.point;
    const double a = rel.dot(plane.u_axis);
    const double b = rel.dot(plane.v_axis);
    const double eps = 1e-9;
    if (std::abs(a) > plane.half_width + eps || std::abs(b) > plane.half_height + eps)
        return std::nullopt;
    return p;
}

}  // namespace scene3d
