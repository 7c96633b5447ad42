#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

/// Triangle mesh, vertices in cm.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    /// Radius of the bounding sphere about the origin.
    double bounding_radius() const;

    Aabb bounds() const;
};

/// Wavefront OBJ with `v`/`f` records only, triangular faces. Faces with
/// texture/normal indices (v/vt/vn) keep the vertex index; polygons with more
/// than three vertices are rejected.
TriMesh load_obj(const std::string& path);
TriMesh parse_obj(std::istream& in, const std::string& name);
void save_obj(const TriMesh& mesh, const std::string& path);

/// Axis-aligned box mesh (12 triangles) centered at the origin.
TriMesh make_box_mesh(double size_x, double size_y, double size_z);

/// L-shaped prism: anisotropic and chiral, useful wherever a silhouette must
/// discriminate orientations.
TriMesh make_l_mesh(double arm_a, double arm_b, double thickness, double depth);

}  // namespace scene3d
