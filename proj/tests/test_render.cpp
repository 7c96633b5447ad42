#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "scene3d/render.hpp"

using namespace scene3d;

namespace {

// Filled convex hull of projected points on the pixel lattice, boundary
// inclusive: the oracle for convex silhouettes.
BinaryMask convex_hull_fill(const std::vector<Vec2>& pts, int w, int h) {
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // A lattice point is in the hull iff no separating half-plane from
            // any hull edge; test all point pairs as candidate edges.
            bool inside = true;
            for (size_t i = 0; i < pts.size() && inside; ++i) {
                for (size_t j = 0; j < pts.size() && inside; ++j) {
                    if (i == j) continue;
                    const Vec2 e = pts[j] - pts[i];
                    if (e.norm() < 1e-12) continue;
                    // Is everything (including the query) on one side?
                    const double q = e.x() * (y - pts[i].y()) - e.y() * (x - pts[i].x());
                    if (q >= -1e-9) continue;
                    bool all_other_side = true;
                    for (const auto& p : pts) {
                        const double s =
                            e.x() * (p.y() - pts[i].y()) - e.y() * (p.x() - pts[i].x());
                        if (s < -1e-9) {
                            all_other_side = false;
                            break;
                        }
                    }
                    if (all_other_side) inside = false;
                }
            }
            if (inside) out.set(x, y);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("render") {

TEST_CASE("icosphere viewpoint counts") {
    CHECK(icosphere_viewpoints(0, 1, 10.0).size() == 12);
    CHECK(icosphere_viewpoints(1, 1, 10.0).size() == 42);
    CHECK(icosphere_viewpoints(2, 1, 10.0).size() == 162);
    CHECK(icosphere_viewpoints(1, 4, 10.0).size() == 168);
}

TEST_CASE("viewpoints sit on the sphere and look at the origin") {
    for (const auto& vp : icosphere_viewpoints(1, 3, 25.0)) {
        CHECK(vp.camera_position.norm() == doctest::Approx(25.0).epsilon(1e-9));
        // Optical axis (camera z in world coords) points at the origin.
        const Vec3 fwd = vp.camera_rotation * Vec3(0, 0, 1);
        CHECK(fwd.isApprox(-vp.camera_position.normalized(), 1e-9));
        CHECK(std::abs(vp.camera_rotation.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("face-on cube projects to the expected square") {
    // f=240, cube side 10 at depth 100 -> 24 px wide.
    const TriMesh cube = make_box_mesh(10, 10, 10);
    const CameraModel cam{240, 240, 320, 240, 640, 480};
    const Viewpoint view{Quat::Identity(), Vec3(0, 0, -100)};
    const BinaryMask m = render_silhouette(cube, Quat::Identity(), 1.0, view, cam);

    int x0 = 640, x1 = -1, y0 = 480, y1 = -1;
    for (int y = 0; y < 480; ++y)
        for (int x = 0; x < 640; ++x)
            if (m.at(x, y)) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
    // Corners at 320 +- 12: inclusive lattice coverage spans [308, 332].
    CHECK(x1 - x0 == 24);
    CHECK(y1 - y0 == 24);
    CHECK(x0 == 308);
    CHECK(y0 == 228);

    // Doubling the scale roughly quadruples the area. A thin plate keeps the
    // front face at constant depth so similar triangles apply cleanly.
    const TriMesh plate = make_box_mesh(10, 10, 0.2);
    const BinaryMask p1 = render_silhouette(plate, Quat::Identity(), 1.0, view, cam);
    const BinaryMask p2 = render_silhouette(plate, Quat::Identity(), 2.0, view, cam);
    CHECK(static_cast<double>(mask_area(p2)) / mask_area(p1) ==
          doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("off-frustum mesh renders empty") {
    const TriMesh cube = make_box_mesh(5, 5, 5);
    const CameraModel cam{240, 240, 320, 240, 640, 480};
    const BinaryMask m =
        render_silhouette_posed(cube, Quat::Identity(), 1.0, Vec3(500, 0, 100), cam);
    CHECK(mask_area(m) == 0);
}

TEST_CASE("vertex behind the camera is a render error") {
    const TriMesh cube = make_box_mesh(10, 10, 10);
    const CameraModel cam{240, 240, 320, 240, 640, 480};
    CHECK_THROWS(render_silhouette_posed(cube, Quat::Identity(), 1.0, Vec3(0, 0, 4), cam));
    CHECK_THROWS(render_silhouette_posed(cube, Quat::Identity(), 1.0, Vec3(0, 0, -50), cam));
}

TEST_CASE("convex silhouette equals filled hull of projected vertices") {
    const TriMesh cube = make_box_mesh(8, 12, 6);
    const CameraModel cam{64, 64, 32, 32, 64, 64};
    const Quat q = Quat(Eigen::AngleAxisd(0.5, Vec3(1, 2, 0.3).normalized()));
    const Viewpoint view{Quat::Identity(), Vec3(0, 0, -40)};

    const BinaryMask got = render_silhouette(cube, q, 1.0, view, cam);

    std::vector<Vec2> projected;
    for (const auto& v : cube.vertices) {
        const Vec3 p = q * v + Vec3(0, 0, 40);
        projected.push_back(cam.project(p));
    }
    const BinaryMask hull = convex_hull_fill(projected, 64, 64);
    CHECK(got == hull);
}

TEST_CASE("rotating object by q equals rotating camera by q^-1") {
    const TriMesh mesh = make_l_mesh(10, 8, 3, 4);
    const CameraModel cam{200, 200, 128, 128, 256, 256};
    const Quat q = Quat(Eigen::AngleAxisd(0.9, Vec3(0.2, 1, 0.5).normalized()));

    const Viewpoint base{Quat::Identity(), Vec3(0, 0, -60)};
    const BinaryMask obj_rotated = render_silhouette(mesh, q, 1.0, base, cam);

    // Rotate the camera rigidly by q^-1 about the origin.
    const Quat qi = q.conjugate();
    const Viewpoint moved{(qi * base.camera_rotation).normalized(), qi * base.camera_position};
    const BinaryMask cam_rotated = render_silhouette(mesh, Quat::Identity(), 1.0, moved, cam);

    CHECK(obj_rotated == cam_rotated);
}

TEST_CASE("doubling all intrinsics scales the mask by two") {
    const TriMesh mesh = make_l_mesh(10, 8, 3, 4);
    const CameraModel cam{120, 120, 64, 64, 128, 128};
    const CameraModel cam2{240, 240, 128, 128, 256, 256};
    const Viewpoint view{Quat::Identity(), Vec3(0, 0, -50)};
    const Quat q = Quat(Eigen::AngleAxisd(0.4, Vec3(1, 1, 1).normalized()));

    const BinaryMask small = render_silhouette(mesh, q, 1.0, view, cam);
    const BinaryMask big = render_silhouette(mesh, q, 1.0, view, cam2);

    // Compare the upscaled small mask with the big render allowing a 1-pixel
    // boundary band: count disagreements farther than 1 px from any edge.
    int mismatched_interior = 0;
    for (int y = 0; y < 256; ++y) {
        for (int x = 0; x < 256; ++x) {
            const bool a = big.at(x, y);
            const bool b = small.at(std::min(x / 2, 127), std::min(y / 2, 127));
            if (a == b) continue;
            bool near_boundary = false;
            for (int dy = -2; dy <= 2 && !near_boundary; ++dy)
                for (int dx = -2; dx <= 2 && !near_boundary; ++dx) {
                    const int sx = std::clamp(x / 2 + dx, 0, 127);
                    const int sy = std::clamp(y / 2 + dy, 0, 127);
                    if (small.at(sx, sy) != b) near_boundary = true;
                }
            if (!near_boundary) ++mismatched_interior;
        }
    }
    CHECK(mismatched_interior == 0);
}

}  // TEST_SUITE
