#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scene3d/camera.hpp"
#include "scene3d/mask.hpp"
#include "scene3d/planner.hpp"
#include "scene3d/scene.hpp"

namespace scene3d {

/// Binary PBM (P4). Foreground pixels are stored black (bit 1).
BinaryMask load_pbm(const std::string& path);
void save_pbm(const BinaryMask& mask, const std::string& path);

/// Binary PGM (P5) with maxval 65535, one value per pixel in millimeters
/// (big-endian); converted to centimeters on load.
DepthMap load_pgm16_depth(const std::string& path);
void save_pgm16_depth(const DepthMap& depth, const std::string& path);

struct ManifestObject {
    int id = 0;
    std::string name;
    std::string mask_path;
    std::string mesh_path;
    double initial_scale = 1.0;
};

/// Reconstruction input bundle. Either a vertical FOV or explicit intrinsics
/// must be present; relative paths are resolved against the manifest's
/// directory at load time.
struct SceneManifest {
    int width = 0;
    int height = 0;
    std::optional<double> fov_v_deg;
    std::optional<std::array<double, 4>> intrinsics;  // fx fy cx cy
    std::string depth_path;
    std::optional<ShotAngle> shot_angle;
    std::vector<ManifestObject> objects;

    CameraModel camera() const;
};

SceneManifest load_manifest(const std::string& path);

/// Scene documents are line-oriented `key: value` text with a schema marker;
/// floating point fields use shortest round-trip formatting, so save/load is
/// exact and the files diff cleanly.
void save_scene(const Scene3D& scene, const std::string& path);

/// `require_meshes` loads each object's mesh (resolved relative to the scene
/// file, then as given); queries and summaries do not need meshes, planning
/// does.
Scene3D load_scene(const std::string& path, bool require_meshes);

void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

}  // namespace scene3d
