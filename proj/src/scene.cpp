#include "scene3d/scene.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scene3d/render.hpp"

namespace scene3d {

std::string to_string(ShotAngle a) {
    switch (a) {
        case ShotAngle::horizontal: return "horizontal";
        case ShotAngle::top_down: return "top_down";
        case ShotAngle::bottom_up: return "bottom_up";
    }
    return "horizontal";
}

ShotAngle shot_angle_from_string(const std::string& s) {
    if (s == "horizontal") return ShotAngle::horizontal;
    if (s == "top_down" || s == "top-down") return ShotAngle::top_down;
    if (s == "bottom_up" || s == "bottom-up") return ShotAngle::bottom_up;
    throw std::invalid_argument("unknown shot angle: " + s);
}

Vec3 camera_frame_up(ShotAngle a) {
    switch (a) {
        case ShotAngle::horizontal: return {0, -1, 0};  // image up
        case ShotAngle::top_down: return {0, 0, -1};    // toward the camera
        case ShotAngle::bottom_up: return {0, 0, 1};    // along the view
    }
    return {0, -1, 0};
}

Vec3 camera_frame_right(ShotAngle a) {
    (void)a;  // image x is "right" for every canonical shot angle
    return {1, 0, 0};
}

const ObjectInstance& Scene3D::object_by_id(int id) const {
    for (const auto& o : objects)
        if (o.id == id) return o;
    throw std::invalid_argument("unknown object id " + std::to_string(id));
}

bool Scene3D::has_object(int id) const {
    return std::any_of(objects.begin(), objects.end(),
                       [id](const ObjectInstance& o) { return o.id == id; });
}

Placement place_object(const CameraModel& cam, const BinaryMask& mask, const DepthMap& depth,
                       const Plane3D& background) {
    const MaskStats stats = mask_stats(mask);  // throws on empty mask
    const int pu = std::clamp(static_cast<int>(std::lround(stats.centroid.x())), 0,
                              depth.width - 1);
    const int pv = std::clamp(static_cast<int>(std::lround(stats.centroid.y())), 0,
                              depth.height - 1);
    const double d = std::abs(depth.at(pu, pv));
    if (d <= 0.0)
        throw std::runtime_error("no depth measurement at the mask centroid");

    // Pixel ray through the (sub-pixel) centroid; the object center is the
    // point on it whose perpendicular depth equals d.
    const Vec3 dir = cam.backproject(stats.centroid.x(), stats.centroid.y(), 1.0).normalized();
    Placement p;
    p.position = dir * (d / dir.z());
    p.off_plane = !ray_plane_intersect({Vec3::Zero(), dir}, background).has_value();
    return p;
}

double calibrate_scale(double initial_scale, const BinaryMask& observed,
                       const BinaryMask& rendered) {
    const double arc_obs = trace_contour(observed).arc_length;
    const double arc_rend = trace_contour(rendered).arc_length;
    if (arc_rend <= 0.0)
        throw std::runtime_error("rendered contour is degenerate (zero arc length)");
    if (arc_obs <= 0.0)
        throw std::runtime_error("observed contour is degenerate (zero arc length)");
    return initial_scale * arc_obs / arc_rend;
}

OrientedBox compute_obb(const TriMesh& mesh, const Quat& rotation, double scale,
                        const Vec3& position, const Vec3& up, const Vec3& right) {
    if (mesh.vertices.empty()) throw std::invalid_argument("mesh has no vertices");

    std::vector<Vec3> pts(mesh.vertices.size());
    Vec3 mean = Vec3::Zero();
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        pts[i] = rotation * (scale * mesh.vertices[i]) + position;
        mean += pts[i];
    }
    mean /= static_cast<double>(pts.size());

    Mat3 cov = Mat3::Zero();
    for (const auto& p : pts) {
        const Vec3 d = p - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(pts.size());

    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    const Mat3 vecs = eig.eigenvectors();  // orthonormal columns

    // Relabel: z = eigenvector most aligned with up, x = remaining one most
    // aligned with right, y completes the right-handed triad.
    int zi = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(vecs.col(i).dot(up)) > std::abs(vecs.col(zi).dot(up))) zi = i;
    int xi = -1;
    for (int i = 0; i < 3; ++i) {
        if (i == zi) continue;
        if (xi < 0 || std::abs(vecs.col(i).dot(right)) > std::abs(vecs.col(xi).dot(right)))
            xi = i;
    }
    Vec3 z = vecs.col(zi);
    if (z.dot(up) < 0) z = -z;
    Vec3 x = vecs.col(xi);
    if (x.dot(right) < 0) x = -x;
    const Vec3 y = z.cross(x);

    OrientedBox box;
    box.axes.col(0) = x;
    box.axes.col(1) = y;
    box.axes.col(2) = z;

    Vec3 lo(1e300, 1e300, 1e300), hi(-1e300, -1e300, -1e300);
    for (const auto& p : pts) {
        const Vec3 c = box.axes.transpose() * p;
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    box.center = box.axes * (0.5 * (lo + hi));
    box.half_extents = (0.5 * (hi - lo)).cwiseMax(1e-6);
    return box;
}

Scene3D build_scene(const std::vector<ObjectInput>& inputs, const CameraModel& cam,
                    const DepthMap& depth, ShotAngle shot_angle,
                    const ReconstructionConfig& config) {
    if (depth.width != cam.width || depth.height != cam.height)
        throw std::invalid_argument("depth map dimensions do not match the camera");
    for (const auto& in : inputs)
        if (in.mask.width != cam.width || in.mask.height != cam.height)
            throw std::invalid_argument("object " + std::to_string(in.id) +
                                        ": mask dimensions do not match the camera");

    Scene3D scene;
    scene.camera = cam;
    scene.shot_angle = shot_angle;

    const Extents extents = scene_extents(cam, depth);
    scene.background = background_plane_placement(cam, extents.max.z());

    const Vec3 up = camera_frame_up(shot_angle);
    const Vec3 right = camera_frame_right(shot_angle);

    for (const auto& in : inputs) {
        try {
            ObjectInstance obj;
            obj.id = in.id;
            obj.name = in.name;
            obj.mesh = in.mesh;
            obj.mesh_path = in.mesh_path;

            const TemplateSet templates = make_template_set(in.mesh, config.templates);
            const RotationEstimate est =
                estimate_rotation(in.mask, in.mesh, templates, config.alpha, config.beta);
            obj.rotation = est.object_rotation;

            const Placement placement = place_object(cam, in.mask, depth, scene.background);
            obj.position = placement.position;
            obj.placed_off_plane = placement.off_plane;

            obj.scale = in.initial_scale;
            for (int pass = 0; pass < config.scale_calibration_passes; ++pass) {
                const BinaryMask rendered =
                    render_silhouette_posed(in.mesh, obj.rotation, obj.scale, obj.position, cam);
                obj.scale = calibrate_scale(obj.scale, in.mask, rendered);
            }

            obj.obb = compute_obb(in.mesh, obj.rotation, obj.scale, obj.position, up, right);
            scene.objects.push_back(std::move(obj));
        } catch (const std::exception& e) {
            throw std::runtime_error("object " + std::to_string(in.id) + ": " + e.what());
        }
    }

    std::sort(scene.objects.begin(), scene.objects.end(),
              [](const ObjectInstance& a, const ObjectInstance& b) { return a.id < b.id; });
    for (size_t i = 1; i < scene.objects.size(); ++i)
        if (scene.objects[i].id == scene.objects[i - 1].id)
            throw std::invalid_argument("duplicate object id " +
                                        std::to_string(scene.objects[i].id));
    return scene;
}

}  // namespace scene3d
