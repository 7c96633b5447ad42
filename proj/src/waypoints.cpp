#include "scene3d/waypoints.hpp"

#include <cmath>
#include <stdexcept>

namespace scene3d {

ReferenceAxes reference_axes(const Vec3& obj_center, const Vec3& target_center,
                             const Vec3& target_z_axis, const Vec3& target_x_axis) {
    const Vec3 diff = target_center - obj_center;
    if (diff.norm() < 1e-9)
        throw std::invalid_argument("object and target centers coincide");

    ReferenceAxes axes;
    axes.d = diff.normalized();

    Vec3 vertical = target_z_axis;
    if (axes.d.cross(vertical).norm() < 1e-6) vertical = target_x_axis;  // d parallel to vertical

    axes.pitch_axis = axes.d.cross(vertical).normalized();
    axes.yaw_axis = axes.d.cross(axes.pitch_axis).normalized();
    axes.roll_axis = axes.d;
    return axes;
}

namespace {

// The object's local axis in the scene frame at the current pose: the initial
// principal axis carried along by the rotation accumulated since the scene
// pose.
Vec3 current_local_axis(const ObjectInstance& obj, const Quat& current_rotation, int axis) {
    const Quat delta = (current_rotation * obj.rotation.conjugate()).normalized();
    return delta * obj.obb.axis(axis);
}

// Signed in-plane angle (about `axis`) that carries `from` onto `to`.
double aligning_angle(const Vec3& axis, const Vec3& from, const Vec3& to) {
    const Vec3 fp = from - from.dot(axis) * axis;
    const Vec3 tp = to - to.dot(axis) * axis;
    if (fp.norm() < 1e-9 || tp.norm() < 1e-9) return 0.0;  // nothing to align
    return std::atan2(axis.dot(fp.cross(tp)), fp.dot(tp));
}

Quat rotate_about(const Vec3& axis, double angle_rad, const Quat& q) {
    return (Quat(Eigen::AngleAxisd(angle_rad, axis)) * q).normalized();
}

}  // namespace

PoseGoal resolve_step(const Scene3D& scene, const PlanStep& step, const PoseGoal& current) {
    PoseGoal goal = current;

    if (const auto* rs = std::get_if<RotateSelf>(&step)) {
        const auto& obj = scene.object_by_id(rs->obj);
        const Vec3 axis = current_local_axis(obj, current.rotation, static_cast<int>(rs->axis));
        goal.rotation = rotate_about(axis, deg_to_rad(rs->degrees), current.rotation);
        return goal;
    }

    if (const auto* rw = std::get_if<RotateWref>(&step)) {
        const auto& obj = scene.object_by_id(rw->obj);
        const auto& target = scene.object_by_id(rw->target);
        const ReferenceAxes axes = reference_axes(current.position, target.position,
                                                  target.obb.axis(2), target.obb.axis(0));
        Vec3 mode_axis;
        int facing_index;  // which local axis should face the target
        switch (rw->mode) {
            case WrefMode::pitch:
                mode_axis = axes.pitch_axis;
                facing_index = 2;
                break;
            case WrefMode::yaw:
                mode_axis = axes.yaw_axis;
                facing_index = 1;
                break;
            case WrefMode::roll:
            default:
                mode_axis = axes.roll_axis;
                facing_index = 1;
                break;
        }
        const Vec3 facing = current_local_axis(obj, current.rotation, facing_index);

        switch (rw->amount.kind) {
            case WrefAmount::Kind::degrees: {
                double sign = 1.0;
                if (rw->mode != WrefMode::roll) {
                    // Positive degrees move the facing axis toward the target.
                    const double toward = mode_axis.dot(facing.cross(axes.d));
                    if (toward < 0) sign = -1.0;
                }
                goal.rotation = rotate_about(mode_axis, sign * deg_to_rad(rw->amount.degrees),
                                             current.rotation);
                break;
            }
            case WrefAmount::Kind::fixed_towards: {
                const double phi = aligning_angle(mode_axis, facing, axes.d);
                goal.rotation = rotate_about(mode_axis, phi, current.rotation);
                break;
            }
            case WrefAmount::Kind::fixed_back: {
                const double phi = aligning_angle(mode_axis, facing, -axes.d);
                goal.rotation = rotate_about(mode_axis, phi, current.rotation);
                break;
            }
        }
        return goal;
    }

    if (const auto* tt = std::get_if<TranslateTarObj>(&step)) {
        scene.object_by_id(tt->obj);  // id validation
        const auto& target = scene.object_by_id(tt->target);
        goal.position = target.position + tt->offset[0] * target.obb.axis(0) +
                        tt->offset[1] * target.obb.axis(1) + tt->offset[2] * target.obb.axis(2);
        return goal;
    }

    const auto& td = std::get<TranslateDirecAxis>(step);
    scene.object_by_id(td.obj);
    // A reference equal to the manipulating object uses its current (possibly
    // already moved) location.
    auto ref_position = [&](int id) {
        return id == td.obj ? current.position : scene.object_by_id(id).position;
    };
    const Vec3 from = ref_position(td.ref1);
    const Vec3 to = ref_position(td.ref2);
    const Vec3 diff = to - from;
    if (diff.norm() < 1e-9)
        throw std::invalid_argument("reference objects coincide; direction undefined");
    goal.position = current.position + td.distance * diff.normalized();
    return goal;
}

PoseGoal start_pose(const Scene3D& scene, int manipulating_id) {
    const auto& obj = scene.object_by_id(manipulating_id);
    PoseGoal p;
    p.position = obj.position;
    p.rotation = obj.rotation;
    p.source_step = -1;
    return p;
}

std::vector<PoseGoal> resolve_plan(const Scene3D& scene, const PlanProgram& program) {
    PoseGoal current = start_pose(scene, program.manipulating_id);
    scene.object_by_id(program.interacting_id);

    std::vector<PoseGoal> goals;
    goals.reserve(program.steps.size());
    for (size_t i = 0; i < program.steps.size(); ++i) {
        const int moved = std::visit([](const auto& s) { return s.obj; }, program.steps[i]);
        if (moved != program.manipulating_id)
            throw std::invalid_argument(
                "step " + std::to_string(i + 1) + " moves object " + std::to_string(moved) +
                " but the plan manipulates object " + std::to_string(program.manipulating_id));
        try {
            current = resolve_step(scene, program.steps[i], current);
        } catch (const std::exception& e) {
            throw std::runtime_error("step " + std::to_string(i + 1) + ": " + e.what());
        }
        current.source_step = static_cast<int>(i);
        goals.push_back(current);
    }
    return goals;
}

}  // namespace scene3d
