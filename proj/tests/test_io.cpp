#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "scene3d/io.hpp"
#include "scene3d/mesh.hpp"
#include "scene3d/rng.hpp"
#include "scene3d/text_format.hpp"

using namespace scene3d;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("scene3d_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(75.0) == "75");
    CHECK(format_double(-3.0) == "-3");
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-6, 6));
        CHECK(parse_double(format_double(v)) == v);
    }
}

TEST_CASE("pbm masks round trip") {
    TempDir dir;
    BinaryMask m(37, 21);  // width not divisible by 8: row padding exercised
    Rng rng(4);
    for (int i = 0; i < 200; ++i)
        m.set(static_cast<int>(rng.uniform_index(37)), static_cast<int>(rng.uniform_index(21)));
    const std::string path = dir.file("mask.pbm");
    save_pbm(m, path);
    CHECK(load_pbm(path) == m);

    CHECK_THROWS(load_pbm(dir.file("missing.pbm")));
}

TEST_CASE("pgm16 depth round trips in millimeters") {
    TempDir dir;
    DepthMap d(23, 11);
    Rng rng(6);
    for (auto& v : d.values) v = std::round(rng.uniform(0, 60000)) / 10.0;  // exact 0.1 cm steps
    const std::string path = dir.file("depth.pgm");
    save_pgm16_depth(d, path);
    const DepthMap back = load_pgm16_depth(path);
    REQUIRE(back.width == d.width);
    REQUIRE(back.height == d.height);
    for (size_t i = 0; i < d.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(d.values[i]).epsilon(1e-12));

    // 100 cm = 1000 mm on disk.
    DepthMap one(1, 1);
    one.at(0, 0) = 100.0;
    save_pgm16_depth(one, path);
    const std::string raw = slurp(path);
    const unsigned hi = static_cast<unsigned char>(raw[raw.size() - 2]);
    const unsigned lo = static_cast<unsigned char>(raw[raw.size() - 1]);
    CHECK(hi * 256 + lo == 1000);
}

TEST_CASE("manifest loading resolves relative paths") {
    TempDir dir;
    fs::create_directories(dir.path / "sub");
    save_pbm(BinaryMask(4, 4), dir.file("sub/m.pbm"));
    save_obj(make_box_mesh(1, 1, 1), dir.file("sub/m.obj"));
    save_pgm16_depth(DepthMap(4, 4, 10.0), dir.file("sub/d.pgm"));

    std::ofstream out(dir.file("scene.manifest"));
    out << "schema: 1\n"
        << "kind: scene_manifest\n"
        << "image: 640 480\n"
        << "camera_fov_deg: 60\n"
        << "depth: sub/d.pgm\n"
        << "shot_angle: top_down\n"
        << "object: id=2 name=can mask=sub/m.pbm mesh=sub/m.obj scale=1.25\n";
    out.close();

    const SceneManifest m = load_manifest(dir.file("scene.manifest"));
    CHECK(m.width == 640);
    CHECK(m.camera().fx == doctest::Approx(415.69219381653056));
    CHECK(m.shot_angle == ShotAngle::top_down);
    REQUIRE(m.objects.size() == 1);
    CHECK(m.objects[0].id == 2);
    CHECK(m.objects[0].initial_scale == 1.25);
    CHECK(fs::exists(m.objects[0].mask_path));
    CHECK(fs::exists(m.objects[0].mesh_path));
    CHECK(fs::exists(m.depth_path));

    // Missing required fields are rejected.
    std::ofstream bad(dir.file("bad.manifest"));
    bad << "schema: 1\nkind: scene_manifest\nimage: 640 480\n";
    bad.close();
    CHECK_THROWS(load_manifest(dir.file("bad.manifest")));
}

TEST_CASE("scene files round trip exactly") {
    TempDir dir;
    save_obj(make_box_mesh(3, 2, 1), dir.file("box.obj"));

    Scene3D scene;
    scene.camera = {415.69219381653056, 415.69219381653056, 320, 240, 640, 480};
    scene.shot_angle = ShotAngle::horizontal;
    scene.background = background_plane_placement(scene.camera, 173.20508075688772);
    ObjectInstance obj;
    obj.id = 4;
    obj.name = "box";
    obj.mesh_path = "box.obj";
    obj.position = Vec3(0.1234567890123, -7.5, 101.25);
    obj.rotation = Quat(0.8, 0.1, -0.3, 0.5).normalized();
    obj.scale = 1.0724563;
    obj.obb.center = obj.position;
    obj.obb.axes = obj.rotation.toRotationMatrix();
    obj.obb.half_extents = Vec3(1.5, 1.0, 0.5);
    scene.objects.push_back(obj);

    const std::string path = dir.file("scene.txt");
    save_scene(scene, path);
    const Scene3D back = load_scene(path, /*require_meshes=*/true);

    REQUIRE(back.objects.size() == 1);
    const auto& o = back.objects[0];
    CHECK(o.position == obj.position);  // bit-exact through the text format
    CHECK(o.scale == obj.scale);
    CHECK(o.rotation.coeffs() == obj.rotation.coeffs());
    CHECK(o.obb.half_extents == obj.obb.half_extents);
    CHECK(back.camera.fx == scene.camera.fx);
    CHECK(o.mesh.vertices.size() == 8);

    // Saving twice is byte-identical.
    save_scene(back, dir.file("scene2.txt"));
    CHECK(slurp(path) == slurp(dir.file("scene2.txt")));

    // Without meshes the geometry is still available.
    const Scene3D light = load_scene(path, false);
    CHECK(light.objects[0].mesh.vertices.empty());
}

TEST_CASE("trajectory files round trip") {
    TempDir dir;
    Trajectory traj;
    Rng rng(21);
    double t = 0.0;
    for (int i = 0; i < 25; ++i) {
        TrajectorySample s;
        t += rng.uniform01() + 0.01;
        s.t = t;
        s.position = Vec3(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0, 100));
        s.rotation = Quat(rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01())
                         .normalized();
        traj.samples.push_back(s);
    }
    traj.waypoint_indices = {0, 10, 24};

    const std::string path = dir.file("traj.txt");
    save_trajectory(traj, path);
    const Trajectory back = load_trajectory(path);
    REQUIRE(back.samples.size() == traj.samples.size());
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        CHECK(back.samples[i].t == traj.samples[i].t);
        CHECK(back.samples[i].position == traj.samples[i].position);
        CHECK(back.samples[i].rotation.coeffs() == traj.samples[i].rotation.coeffs());
    }
    CHECK(back.waypoint_indices == traj.waypoint_indices);

    save_trajectory(back, dir.file("traj2.txt"));
    CHECK(slurp(path) == slurp(dir.file("traj2.txt")));
}

TEST_CASE("obj meshes load v/f records and reject polygons") {
    TempDir dir;
    {
        std::ofstream out(dir.file("tri.obj"));
        out << "# comment\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
            << "vn 0 0 1\n"
            << "f 1 2 3\nf 1/1 2/1 4/1\nf 2//1 3//1 4//1\n";
    }
    const TriMesh m = load_obj(dir.file("tri.obj"));
    CHECK(m.vertices.size() == 4);
    CHECK(m.triangles.size() == 3);

    {
        std::ofstream out(dir.file("quad.obj"));
        out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
    }
    CHECK_THROWS(load_obj(dir.file("quad.obj")));

    // Round trip.
    save_obj(m, dir.file("back.obj"));
    const TriMesh back = load_obj(dir.file("back.obj"));
    CHECK(back.vertices.size() == m.vertices.size());
    CHECK(back.triangles == m.triangles);
}

}  // TEST_SUITE
