#include "scene3d/render.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace scene3d {

namespace {

// Unit icosahedron vertices and faces.
void icosahedron(std::vector<Vec3>& verts, std::vector<std::array<int, 3>>& faces) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                               {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                               {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    verts.clear();
    for (const auto& r : raw) verts.push_back(Vec3(r[0], r[1], r[2]).normalized());
    faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
}

void subdivide(std::vector<Vec3>& verts, std::vector<std::array<int, 3>>& faces) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(verts.size());
        verts.push_back((verts[a] + verts[b]).normalized());
        midpoint.emplace(key, idx);
        return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
        const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
        next.push_back({f[0], ab, ca});
        next.push_back({f[1], bc, ab});
        next.push_back({f[2], ca, bc});
        next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
}

}  // namespace

Viewpoint look_at_origin(const Vec3& position, double roll_deg) {
    const Vec3 forward = (-position).normalized();  // camera z, toward origin
    Vec3 up_w(0, 0, 1);
    if (std::abs(forward.dot(up_w)) > 0.999) up_w = Vec3(0, 1, 0);
    // Camera frame is x-right, y-down, z-forward; keep camera up (-y) at up_w.
    const Vec3 x_cam = (-up_w).cross(forward).normalized();
    const Vec3 y_cam = forward.cross(x_cam);
    Mat3 r;
    r.col(0) = x_cam;
    r.col(1) = y_cam;
    r.col(2) = forward;
    Quat q(r);
    q = q * Quat(Eigen::AngleAxisd(deg_to_rad(roll_deg), Vec3(0, 0, 1)));
    return {q.normalized(), position};
}

std::vector<Viewpoint> icosphere_viewpoints(int subdivision_level, int inplane_count,
                                            double radius) {
    if (subdivision_level < 0) throw std::invalid_argument("subdivision level must be >= 0");
    if (inplane_count < 1) throw std::invalid_argument("inplane count must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("viewpoint radius must be positive");

    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    icosahedron(verts, faces);
    for (int i = 0; i < subdivision_level; ++i) subdivide(verts, faces);

    std::vector<Viewpoint> views;
    views.reserve(verts.size() * inplane_count);
    for (const auto& v : verts)
        for (int k = 0; k < inplane_count; ++k)
            views.push_back(look_at_origin(v * radius, 360.0 * k / inplane_count));
    return views;
}

namespace {

void rasterize_triangle(BinaryMask& mask, const Vec2& a, const Vec2& b, const Vec2& c) {
    // Signed doubled area; orient CCW, skip degenerate triangles.
    Vec2 p0 = a, p1 = b, p2 = c;
    const double area2 = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
    if (area2 == 0.0) return;
    if (area2 < 0.0) std::swap(p1, p2);

    const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({p0.x(), p1.x(), p2.x()}))));
    const int x1 = std::min(mask.width - 1,
                            static_cast<int>(std::floor(std::max({p0.x(), p1.x(), p2.x()}))));
    const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({p0.y(), p1.y(), p2.y()}))));
    const int y1 = std::min(mask.height - 1,
                            static_cast<int>(std::floor(std::max({p0.y(), p1.y(), p2.y()}))));

    auto edge = [](const Vec2& s, const Vec2& e, double px, double py) {
        return (e.x() - s.x()) * (py - s.y()) - (e.y() - s.y()) * (px - s.x());
    };
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double px = x, py = y;
            if (edge(p0, p1, px, py) >= 0.0 && edge(p1, p2, px, py) >= 0.0 &&
                edge(p2, p0, px, py) >= 0.0)
                mask.set(x, y);
        }
    }
}

BinaryMask rasterize_camera_space(const std::vector<Vec3>& cam_pts,
                                  const std::vector<std::array<int, 3>>& tris,
                                  const CameraModel& cam) {
    for (const auto& p : cam_pts)
        if (p.z() <= 0.0)
            throw std::runtime_error("render error: vertex at or behind the camera plane");
    std::vector<Vec2> projected(cam_pts.size());
    for (size_t i = 0; i < cam_pts.size(); ++i) projected[i] = cam.project(cam_pts[i]);
    BinaryMask mask(cam.width, cam.height);
    for (const auto& t : tris)
        rasterize_triangle(mask, projected[t[0]], projected[t[1]], projected[t[2]]);
    return mask;
}

}  // namespace

BinaryMask render_silhouette(const TriMesh& mesh, const Quat& object_rotation,
                             double object_scale, const Viewpoint& view,
                             const CameraModel& cam) {
    if (!(object_scale > 0.0)) throw std::invalid_argument("object scale must be positive");
    const Mat3 obj = object_rotation.toRotationMatrix();
    const Mat3 world_to_cam = view.camera_rotation.toRotationMatrix().transpose();
    std::vector<Vec3> pts(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3 w = obj * (object_scale * mesh.vertices[i]);
        pts[i] = world_to_cam * (w - view.camera_position);
    }
    return rasterize_camera_space(pts, mesh.triangles, cam);
}

BinaryMask render_silhouette_posed(const TriMesh& mesh, const Quat& rotation, double scale,
                                   const Vec3& position, const CameraModel& cam) {
    if (!(scale > 0.0)) throw std::invalid_argument("object scale must be positive");
    const Mat3 r = rotation.toRotationMatrix();
    std::vector<Vec3> pts(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
        pts[i] = r * (scale * mesh.vertices[i]) + position;
    return rasterize_camera_space(pts, mesh.triangles, cam);
}

}  // namespace scene3d
