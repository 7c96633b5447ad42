#pragma once

#include <vector>

#include "scene3d/camera.hpp"
#include "scene3d/mask.hpp"
#include "scene3d/mesh.hpp"

namespace scene3d {

/// Camera pose on the template sphere: position in cm, rotation maps
/// camera-frame vectors to world-frame vectors. The optical axis (+z of the
/// camera frame) points at the origin.
struct Viewpoint {
    Quat camera_rotation;
    Vec3 camera_position;
};

/// Vertices of a subdivided icosahedron (12 / 42 / 162 ... directions), each
/// paired with `inplane_count` camera rolls evenly spaced over [0, 360).
/// Deterministic ordering: vertex-major, roll-minor.
std::vector<Viewpoint> icosphere_viewpoints(int subdivision_level, int inplane_count,
                                            double radius);

/// Camera at `position` looking at the origin, camera up aligned with world +z
/// (falls back to +y when degenerate), then rolled about the optical axis.
Viewpoint look_at_origin(const Vec3& position, double roll_deg = 0.0);

/// Binary silhouette of the mesh, rotated by object_rotation and uniformly
/// scaled about the origin, seen from `view`. Scanline fill over the integer
/// pixel lattice, boundary-inclusive; a z-buffer is unnecessary for
/// silhouettes. Throws if any transformed vertex has non-positive view depth
/// (no near-plane clipping).
BinaryMask render_silhouette(const TriMesh& mesh, const Quat& object_rotation,
                             double object_scale, const Viewpoint& view,
                             const CameraModel& cam);

/// Silhouette of a posed object (rotation, scale, position in the camera
/// frame) through the scene camera at the origin.
BinaryMask render_silhouette_posed(const TriMesh& mesh, const Quat& rotation, double scale,
                                   const Vec3& position, const CameraModel& cam);

}  // namespace scene3d
