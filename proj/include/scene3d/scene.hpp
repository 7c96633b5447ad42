#pragma once

#include <string>
#include <vector>

#include "scene3d/camera.hpp"
#include "scene3d/mask.hpp"
#include "scene3d/mesh.hpp"
#include "scene3d/pose_match.hpp"

namespace scene3d {

enum class ShotAngle { horizontal, top_down, bottom_up };

std::string to_string(ShotAngle a);
ShotAngle shot_angle_from_string(const std::string& s);

/// Box with orthonormal right-handed axes; the axes double as the object's
/// principal x/y/z directions (z closest to up, x closest to right).
struct OrientedBox {
    Vec3 center;
    Mat3 axes;  // columns: x, y, z
    Vec3 half_extents;

    Vec3 axis(int i) const { return axes.col(i); }

    /// Half-size of the box projected on the world axes (its tight AABB).
    Vec3 world_half_extents() const {
        return axes.cwiseAbs() * half_extents;
    }
};

struct ObjectInstance {
    int id = 0;
    std::string name;
    TriMesh mesh;
    std::string mesh_path;  // provenance, kept for serialization
    Quat rotation = Quat::Identity();
    Vec3 position = Vec3::Zero();
    double scale = 1.0;
    OrientedBox obb;
    bool placed_off_plane = false;  // centroid ray missed the background plane

    Vec3 transformed_vertex(size_t i) const {
        return rotation * (scale * mesh.vertices[i]) + position;
    }
};

/// Reconstructed metric scene. The camera sits at the origin looking along +z
/// (the depth axis); everything is in centimeters in the camera frame.
struct Scene3D {
    CameraModel camera;
    std::vector<ObjectInstance> objects;
    Plane3D background;
    ShotAngle shot_angle = ShotAngle::horizontal;

    const ObjectInstance& object_by_id(int id) const;
    bool has_object(int id) const;
};

struct Placement {
    Vec3 position;
    bool off_plane = false;  // fell back to pure ray scaling
};

/// Eq.-style placement: read the metric depth at the mask centroid and put the
/// object on the centroid pixel ray at that perpendicular depth. If the ray
/// misses the finite background plane the same scaling is used but the result
/// is flagged.
Placement place_object(const CameraModel& cam, const BinaryMask& mask, const DepthMap& depth,
                       const Plane3D& background);

/// Contour-length scale refinement: S_adj = S_init * arc(observed) / arc(rendered).
double calibrate_scale(double initial_scale, const BinaryMask& observed,
                       const BinaryMask& rendered);

/// PCA-based oriented bounding box of the posed mesh. The eigenvector closest
/// to `up` becomes the z axis (sign toward up), the remaining one closest to
/// `right` becomes x, y = z cross x. Degenerate extents are floored at 1e-6.
OrientedBox compute_obb(const TriMesh& mesh, const Quat& rotation, double scale,
                        const Vec3& position, const Vec3& up = Vec3(0, 0, 1),
                        const Vec3& right = Vec3(1, 0, 0));

struct ObjectInput {
    int id = 0;
    std::string name;
    BinaryMask mask;
    TriMesh mesh;
    std::string mesh_path;
    double initial_scale = 1.0;
};

struct ReconstructionConfig {
    TemplateConfig templates;
    double alpha = 1.0;
    double beta = 1.0;
    int scale_calibration_passes = 2;
};

/// Full per-object pipeline: rotation from template matching, placement from
/// the centroid ray, scale calibration against the rendered silhouette, then
/// the principal-axis OBB. The background plane sits at the maximum scene
/// depth. Deterministic given inputs and configuration.
Scene3D build_scene(const std::vector<ObjectInput>& inputs, const CameraModel& cam,
                    const DepthMap& depth, ShotAngle shot_angle,
                    const ReconstructionConfig& config = {});

/// Camera-frame direction of world "up"/"right" for a shot angle (the inverse
/// of the canonical camera-to-world mapping applied to the world axis).
Vec3 camera_frame_up(ShotAngle a);
Vec3 camera_frame_right(ShotAngle a);

}  // namespace scene3d
