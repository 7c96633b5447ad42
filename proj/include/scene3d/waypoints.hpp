#pragma once

#include <vector>

#include "scene3d/plan_dsl.hpp"
#include "scene3d/scene.hpp"

namespace scene3d {

/// Target pose for the manipulating object after one plan step.
struct PoseGoal {
    Vec3 position = Vec3::Zero();
    Quat rotation = Quat::Identity();
    int source_step = -1;
};

/// Rotation axes of a rotate_wref step. d points from the manipulating object
/// toward the target; pitch/yaw are perpendicular to d, roll is d itself.
struct ReferenceAxes {
    Vec3 d;
    Vec3 pitch_axis;
    Vec3 yaw_axis;
    Vec3 roll_axis;
};

/// pitch = d x z_target, yaw = d x pitch, roll = d (all normalized). When d is
/// parallel to the target's vertical axis, target_x_axis substitutes for it.
ReferenceAxes reference_axes(const Vec3& obj_center, const Vec3& target_center,
                             const Vec3& target_z_axis, const Vec3& target_x_axis = Vec3(1, 0, 0));

/// Apply one manipulation to the current pose of the manipulating object.
/// Rotations act about axes through the object center; translations come from
/// the target's principal axes or a reference direction. See the plan grammar
/// for the step semantics.
PoseGoal resolve_step(const Scene3D& scene, const PlanStep& step, const PoseGoal& current);

/// Fold the whole program from the manipulating object's scene pose; one goal
/// per step.
std::vector<PoseGoal> resolve_plan(const Scene3D& scene, const PlanProgram& program);

/// The manipulating object's pose in the scene, the fold's starting point.
PoseGoal start_pose(const Scene3D& scene, int manipulating_id);

}  // namespace scene3d
