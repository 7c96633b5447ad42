#include "doctest.h"

#include <cmath>

#include "scene3d/render.hpp"
#include "scene3d/scene.hpp"

using namespace scene3d;

namespace {

BinaryMask rect_mask(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) m.set(x, y);
    return m;
}

// Billboard depth: the object's center depth across its silhouette, a fixed
// background depth elsewhere.
DepthMap billboard_depth(const BinaryMask& mask, double object_depth, double background_depth) {
    DepthMap d(mask.width, mask.height, background_depth);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) d.at(x, y) = object_depth;
    return d;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("placement on the centroid ray") {
    CameraModel cam{240, 240, 320, 240, 640, 480};
    const Plane3D bg = background_plane_placement(cam, 240);

    // Centroid at the principal point.
    BinaryMask center = rect_mask(640, 480, 319, 239, 3, 3);
    DepthMap d100 = billboard_depth(center, 100, 240);
    const Placement p = place_object(cam, center, d100, bg);
    CHECK(p.position.isApprox(Vec3(0, 0, 100), 1e-9));
    CHECK(!p.off_plane);

    // Centroid at (560, 240): ray (1, 0, 1)/sqrt(2) scaled so z = 120.
    BinaryMask off = rect_mask(640, 480, 559, 239, 3, 3);
    DepthMap d120 = billboard_depth(off, 120, 240);
    const Placement q = place_object(cam, off, d120, bg);
    CHECK(q.position.isApprox(Vec3(120, 0, 120), 1e-9));

    // Depth equal to the background depth puts the center on the plane.
    DepthMap dbg = billboard_depth(center, 240, 240);
    const Placement r = place_object(cam, center, dbg, bg);
    CHECK(std::abs(r.position.z() - 240.0) < 1e-9);

    // Zero depth at the centroid is an error.
    DepthMap zeros(640, 480, 0.0);
    CHECK_THROWS(place_object(cam, center, zeros, bg));
}

TEST_CASE("depth consistency: camera-frame z equals the centroid depth") {
    CameraModel cam{300, 300, 320, 240, 640, 480};
    const Plane3D bg = background_plane_placement(cam, 300);
    for (int i = 0; i < 5; ++i) {
        BinaryMask m = rect_mask(640, 480, 40 + 90 * i, 60 + 50 * i, 30, 24);
        const double depth = 60.0 + 30.0 * i;
        DepthMap d = billboard_depth(m, depth, 300);
        const Placement p = place_object(cam, m, d, bg);
        CHECK(p.position.z() == doctest::Approx(depth).epsilon(1e-12));
        // Reprojection returns to the centroid.
        const Vec2 uv = cam.project(p.position);
        const MaskStats s = mask_stats(m);
        CHECK(std::abs(uv.x() - s.centroid.x()) < 1e-6);
        CHECK(std::abs(uv.y() - s.centroid.y()) < 1e-6);
    }
}

TEST_CASE("scale calibration follows the contour-length ratio") {
    const BinaryMask sq20 = rect_mask(64, 64, 4, 4, 20, 20);
    const BinaryMask sq30 = rect_mask(64, 64, 4, 4, 30, 30);

    CHECK(calibrate_scale(1.0, sq20, sq20) == doctest::Approx(1.0).epsilon(1e-12));
    // Perimeter of an n-pixel square block is 4(n-1).
    CHECK(calibrate_scale(1.0, sq20, sq30) == doctest::Approx(76.0 / 116.0).epsilon(1e-12));
    CHECK(calibrate_scale(2.0, sq20, sq30) == doctest::Approx(2.0 * 76.0 / 116.0).epsilon(1e-12));

    // Rendered perimeter twice the observed halves the scale.
    const BinaryMask sq10 = rect_mask(64, 64, 4, 4, 10, 10);
    const BinaryMask sq19 = rect_mask(64, 64, 4, 4, 19, 19);
    CHECK(calibrate_scale(1.0, sq10, sq19) == doctest::Approx(0.5).epsilon(1e-12));

    BinaryMask single(64, 64);
    single.set(5, 5);
    CHECK_THROWS(calibrate_scale(1.0, sq20, single));  // degenerate rendered contour
}

TEST_CASE("principal-axis OBB of boxes") {
    const TriMesh box = make_box_mesh(2, 1, 0.5);

    const OrientedBox obb = compute_obb(box, Quat::Identity(), 1.0, Vec3::Zero());
    CHECK(obb.axis(0).isApprox(Vec3(1, 0, 0), 1e-9));
    CHECK(obb.axis(1).isApprox(Vec3(0, 1, 0), 1e-9));
    CHECK(obb.axis(2).isApprox(Vec3(0, 0, 1), 1e-9));
    CHECK(obb.half_extents.isApprox(Vec3(1, 0.5, 0.25), 1e-9));
    CHECK(obb.center.norm() < 1e-9);

    // Rotating 30 degrees about z rotates the recovered x axis with it.
    const Quat rz30(Eigen::AngleAxisd(deg_to_rad(30), Vec3(0, 0, 1)));
    const OrientedBox rot = compute_obb(box, rz30, 1.0, Vec3(5, 6, 7));
    const Vec3 expected_x = rz30 * Vec3(1, 0, 0);
    CHECK(rad_to_deg(std::acos(std::clamp(rot.axis(0).dot(expected_x), -1.0, 1.0))) < 1.0);
    CHECK(rot.center.isApprox(Vec3(5, 6, 7), 1e-9));

    // Doubling the scale doubles the half extents.
    const OrientedBox big = compute_obb(box, Quat::Identity(), 2.0, Vec3::Zero());
    CHECK(big.half_extents.isApprox(Vec3(2, 1, 0.5), 1e-9));

    // Right-handed orthonormal frame.
    CHECK(std::abs(rot.axes.determinant() - 1.0) < 1e-9);
}

TEST_CASE("OBB contains every transformed vertex") {
    const TriMesh mesh = make_l_mesh(9, 7, 2, 3);
    const Quat q(Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()));
    const Vec3 t(10, -4, 80);
    const OrientedBox obb = compute_obb(mesh, q, 1.4, t);
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3 p = q * (1.4 * mesh.vertices[i]) + t;
        const Vec3 local = obb.axes.transpose() * (p - obb.center);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(local[k]) <= obb.half_extents[k] + 1e-6);
    }
}

TEST_CASE("degenerate meshes get floored extents") {
    TriMesh flat;
    flat.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)};
    flat.triangles = {{0, 1, 2}, {1, 3, 2}};
    const OrientedBox obb = compute_obb(flat, Quat::Identity(), 1.0, Vec3::Zero());
    for (int k = 0; k < 3; ++k) CHECK(obb.half_extents[k] >= 1e-6);
}

TEST_CASE("build_scene: empty object list leaves background only") {
    CameraModel cam{240, 240, 320, 240, 640, 480};
    DepthMap depth(640, 480, 150.0);
    const Scene3D scene = build_scene({}, cam, depth, ShotAngle::horizontal);
    CHECK(scene.objects.empty());
    CHECK(scene.background.point.z() == doctest::Approx(150.0));
}

TEST_CASE("build_scene synthetic round trip on one cube") {
    // A longer lens keeps the silhouette well resolved (~100 px), which the
    // Hu-based matcher needs to separate neighbouring templates.
    CameraModel cam{420, 420, 320, 240, 640, 480};
    const TriMesh cube = make_box_mesh(10, 14, 8);

    ReconstructionConfig cfg;
    cfg.templates.subdivision_level = 0;
    cfg.templates.inplane_count = 4;

    // Ground-truth rotation drawn from the template set so the matcher can
    // recover it exactly.
    const TemplateSet tset = make_template_set(cube, cfg.templates);
    const Quat gt_rot = tset.viewpoints[7].camera_rotation.conjugate();
    const Vec3 gt_pos(4, -3, 70);
    const double gt_scale = 1.15;

    const BinaryMask mask = render_silhouette_posed(cube, gt_rot, gt_scale, gt_pos, cam);
    REQUIRE(mask_area(mask) > 0);
    // Billboard depth at the center depth, background at 160.
    DepthMap depth(640, 480, 160.0);
    for (int y = 0; y < 480; ++y)
        for (int x = 0; x < 640; ++x)
            if (mask.at(x, y)) depth.at(x, y) = gt_pos.z();

    ObjectInput in;
    in.id = 0;
    in.name = "cube";
    in.mask = mask;
    in.mesh = cube;
    const Scene3D scene = build_scene({in}, cam, depth, ShotAngle::horizontal, cfg);
    REQUIRE(scene.objects.size() == 1);
    const auto& obj = scene.objects[0];

    const double depth_range = 160.0 - gt_pos.z();
    CHECK((obj.position - gt_pos).norm() <= 0.02 * depth_range);
    CHECK(std::abs(obj.scale - gt_scale) / gt_scale <= 0.05);

    // Reprojected center lands within 2 px of the mask centroid.
    const Vec2 uv = cam.project(obj.position);
    const MaskStats s = mask_stats(mask);
    CHECK((uv - s.centroid).norm() <= 2.0);
}

TEST_CASE("build_scene: two equal masks at different depths, farther is larger") {
    CameraModel cam{240, 240, 320, 240, 640, 480};
    const TriMesh cube = make_box_mesh(10, 10, 10);

    ReconstructionConfig cfg;
    cfg.templates.subdivision_level = 0;
    cfg.templates.inplane_count = 1;

    // Two identical 40x40 masks left and right, one at depth 80, one at 140.
    BinaryMask m0 = rect_mask(640, 480, 140, 220, 40, 40);
    BinaryMask m1 = rect_mask(640, 480, 460, 220, 40, 40);
    DepthMap depth(640, 480, 200.0);
    for (int y = 0; y < 480; ++y)
        for (int x = 0; x < 640; ++x) {
            if (m0.at(x, y)) depth.at(x, y) = 80.0;
            if (m1.at(x, y)) depth.at(x, y) = 140.0;
        }

    std::vector<ObjectInput> inputs(2);
    inputs[0] = {0, "near", m0, cube, "", 1.0};
    inputs[1] = {1, "far", m1, cube, "", 1.0};
    const Scene3D scene = build_scene(inputs, cam, depth, ShotAngle::horizontal, cfg);
    CHECK(scene.objects[1].scale > scene.objects[0].scale);
    CHECK(scene.objects[1].scale / scene.objects[0].scale ==
          doctest::Approx(140.0 / 80.0).epsilon(0.15));
}

TEST_CASE("build_scene failures carry the object id") {
    CameraModel cam{240, 240, 320, 240, 640, 480};
    DepthMap depth(640, 480, 100.0);
    ObjectInput bad;
    bad.id = 7;
    bad.name = "ghost";
    bad.mask = BinaryMask(640, 480);  // empty mask
    bad.mesh = make_box_mesh(5, 5, 5);
    try {
        build_scene({bad}, cam, depth, ShotAngle::horizontal);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("object 7") != std::string::npos);
    }
}

}  // TEST_SUITE
