#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scene3d/scene.hpp"

namespace scene3d {

/// Signed permutation from the camera frame (x right, y down, z forward) to
/// the human-intuitive world frame (x right, y depth/back, z up).
struct CanonicalFrame {
    ShotAngle shot_angle = ShotAngle::horizontal;
    Mat3 mapping;  // world = mapping * camera

    Vec3 to_world(const Vec3& cam) const { return mapping * cam; }
};

CanonicalFrame canonical_axes(ShotAngle shot_angle);

enum class ShotAngleHint { horizontal, top_down_or_bottom_up };

struct ShotAngleSuggestion {
    ShotAngleHint hint = ShotAngleHint::horizontal;
    double confidence = 0.0;
    ShotAngle resolved = ShotAngle::horizontal;  // what a caller should use
};

/// Depth-span heuristic: a flat depth profile suggests a top-down or bottom-up
/// shot (the two cannot be told apart without visual cues; top_down is
/// resolved). An explicitly supplied angle always passes through.
ShotAngleSuggestion infer_shot_angle(const Extents& extents, const CameraModel& cam,
                                     std::optional<ShotAngle> explicit_angle = {});

enum class Direction { left, right, front, behind, above, below };

const char* to_string(Direction d);

/// Direction bucket of a world-frame offset: the axis with the largest
/// absolute component wins (ties prefer x over y over z).
Direction dominant_direction(const Vec3& world_offset);

struct ObjectSummary {
    int id = 0;
    std::string name;
    Vec3 center_world;
    Mat3 axes_world;  // columns: x (right-most), y (back-most), z (up-most)
    Vec3 size;        // full extents, reported as W x D x H
    std::map<Direction, int> nearest;  // closest neighbour id per direction
};

struct SpatialSummary {
    std::vector<ObjectSummary> objects;
    std::string text;  // deterministic rendering in the summary block format
};

SpatialSummary summarize_scene(const Scene3D& scene);

enum class QueryKind {
    distance,        // Euclidean distance between two centers
    distance_axis,   // |offset component| along one canonical axis
    size,            // OBB extent of one object along one of W/D/H
    tilt,            // angle between the object z axis and world up
    tilt_axis,       // tilt projected onto the plane normal to an axis
    angle_between,   // angle between two objects' matching principal axes
    relation,        // is A <direction> of B
    count_predicate  // count/list objects that are upright or tilted
};

struct MetricQuery {
    QueryKind kind = QueryKind::distance;
    int a = -1;
    int b = -1;
    int axis = -1;          // 0/1/2 = world x/y/z; -1 = default for the kind
    Direction relation = Direction::left;
    std::string predicate;  // "upright" | "tilted"
    bool list_ids = false;  // count_predicate: list instead of count
};

struct QueryAnswer {
    enum class Type { number, boolean, id_list };
    Type type = Type::number;
    double value = 0.0;
    std::string unit;  // "cm" | "deg" | "" for counts
    bool yes = false;
    std::vector<int> ids;

    std::string to_text() const;
};

/// One query per line, e.g. "distance 0 1", "tilt 2", "tilt 2 axis=y",
/// "size 0 axis=z", "angle_between 0 1", "relation 0 1 left",
/// "count upright", "which tilted". Throws with the offending token.
MetricQuery parse_query(const std::string& line);

/// Deterministic metric answers from the reconstructed scene. The upright
/// threshold (degrees) feeds the count/list predicates.
QueryAnswer answer_metric_query(const Scene3D& scene, const MetricQuery& q,
                                double upright_threshold_deg = 5.0);

/// Camera rotation between two shots: world-frame per-axis degrees, composed
/// in Z-Y-X order.
struct CameraDelta {
    Vec3 per_axis_deg = Vec3::Zero();
};

struct ObjectDiff {
    int id = 0;
    Vec3 translation_world;       // actual motion (camera change compensated)
    double total_distance = 0.0;
    double rotation_angle_deg = 0.0;  // [0, 180]
    Vec3 rotation_axis = Vec3::Zero();
    Vec3 euler_zyx_deg = Vec3::Zero();  // yaw (z), pitch (y), roll (x)
    double tilt_change_deg = 0.0;
    Vec3 apparent_translation_cam;    // raw camera-frame delta
    Vec3 apparent_translation_world;  // world mapping of the raw delta
};

struct SceneDiff {
    std::vector<ObjectDiff> objects;  // ids shared by both scenes, ascending
    std::optional<Vec3> camera_delta_deg;
};

/// Per-object deltas between two reconstructions sharing object ids, in the
/// before-scene's canonical world frame. With a camera delta, "actual" values
/// compensate the camera motion while "apparent" values ignore it.
SceneDiff diff_scenes(const Scene3D& before, const Scene3D& after,
                      const std::optional<CameraDelta>& camera_delta = {});

}  // namespace scene3d
