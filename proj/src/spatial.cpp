#include "scene3d/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace scene3d {

CanonicalFrame canonical_axes(ShotAngle shot_angle) {
    CanonicalFrame f;
    f.shot_angle = shot_angle;
    Mat3& m = f.mapping;
    switch (shot_angle) {
        case ShotAngle::horizontal:
            // cam x -> +x, cam y (down) -> -z, cam z (depth) -> +y
            m.col(0) = Vec3(1, 0, 0);
            m.col(1) = Vec3(0, 0, -1);
            m.col(2) = Vec3(0, 1, 0);
            break;
        case ShotAngle::top_down:
            // depth looks down: cam z -> -z, cam x -> +x, cam -y -> +y
            m.col(0) = Vec3(1, 0, 0);
            m.col(1) = Vec3(0, -1, 0);
            m.col(2) = Vec3(0, 0, -1);
            break;
        case ShotAngle::bottom_up:
            // depth looks up: cam z -> +z, cam x -> +x, cam y -> +y
            m.col(0) = Vec3(1, 0, 0);
            m.col(1) = Vec3(0, 1, 0);
            m.col(2) = Vec3(0, 0, 1);
            break;
    }
    return f;
}

ShotAngleSuggestion infer_shot_angle(const Extents& extents, const CameraModel& cam,
                                     std::optional<ShotAngle> explicit_angle) {
    (void)cam;
    if (explicit_angle) {
        ShotAngleSuggestion s;
        s.resolved = *explicit_angle;
        s.hint = *explicit_angle == ShotAngle::horizontal
                     ? ShotAngleHint::horizontal
                     : ShotAngleHint::top_down_or_bottom_up;
        s.confidence = 1.0;
        return s;
    }
    const double depth_span = extents.max.z() - extents.min.z();
    const double diag = extents.diagonal();
    const double ratio = diag > 0.0 ? depth_span / diag : 0.0;

    ShotAngleSuggestion s;
    if (ratio < 0.15) {
        // Flat depth: looking straight down or straight up; the two cannot be
        // separated without visual cues.
        s.hint = ShotAngleHint::top_down_or_bottom_up;
        s.resolved = ShotAngle::top_down;
        s.confidence = 0.3;
    } else {
        s.hint = ShotAngleHint::horizontal;
        s.resolved = ShotAngle::horizontal;
        s.confidence = std::min(0.9, 0.4 + 2.0 * ratio);
    }
    return s;
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::left: return "left";
        case Direction::right: return "right";
        case Direction::front: return "front";
        case Direction::behind: return "behind";
        case Direction::above: return "above";
        case Direction::below: return "below";
    }
    return "left";
}

Direction dominant_direction(const Vec3& world_offset) {
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(world_offset[i]) > std::abs(world_offset[axis])) axis = i;
    const bool positive = world_offset[axis] >= 0.0;
    switch (axis) {
        case 0: return positive ? Direction::right : Direction::left;
        case 1: return positive ? Direction::behind : Direction::front;
        default: return positive ? Direction::above : Direction::below;
    }
}

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v + 0.0);  // -0.0 becomes +0.0
    return buf;
}

std::string vec_text(const Vec3& v, const char* pattern) {
    return "[" + fmt(pattern, v.x()) + ", " + fmt(pattern, v.y()) + ", " + fmt(pattern, v.z()) +
           "]";
}

}  // namespace

SpatialSummary summarize_scene(const Scene3D& scene) {
    const CanonicalFrame frame = canonical_axes(scene.shot_angle);

    SpatialSummary summary;
    for (const auto& obj : scene.objects) {
        ObjectSummary s;
        s.id = obj.id;
        s.name = obj.name;
        s.center_world = frame.to_world(obj.position);
        s.axes_world = frame.mapping * obj.obb.axes;
        s.size = 2.0 * obj.obb.half_extents;
        summary.objects.push_back(std::move(s));
    }

    // Closest neighbour per direction under the dominance rule.
    for (auto& s : summary.objects) {
        std::map<Direction, std::pair<double, int>> best;
        for (const auto& other : summary.objects) {
            if (other.id == s.id) continue;
            const Vec3 offset = other.center_world - s.center_world;
            const Direction dir = dominant_direction(offset);
            const double dist = offset.norm();
            auto it = best.find(dir);
            if (it == best.end() || dist < it->second.first ||
                (dist == it->second.first && other.id < it->second.second))
                best[dir] = {dist, other.id};
        }
        for (const auto& [dir, hit] : best) s.nearest[dir] = hit.second;
    }

    std::ostringstream out;
    bool first_obj = true;
    for (const auto& s : summary.objects) {
        if (!first_obj) out << "\n";
        first_obj = false;
        out << "Obj " << s.id << " spatial context: 3D center: " << vec_text(s.center_world, "%.1f")
            << " cm; X-axis (right): " << vec_text(s.axes_world.col(0), "%.4f")
            << "; Y-axis (back): " << vec_text(s.axes_world.col(1), "%.4f")
            << "; Z-axis (up): " << vec_text(s.axes_world.col(2), "%.4f") << "\n";
        out << "Obj " << s.id << " size: " << fmt("%.2f", s.size.x()) << " cm x "
            << fmt("%.2f", s.size.y()) << " cm x " << fmt("%.2f", s.size.z())
            << " cm (WxDxH)\n";
        if (!s.nearest.empty()) {
            out << "Obj " << s.id << " closest per direction: ";
            bool first = true;
            for (Direction d : {Direction::left, Direction::right, Direction::front,
                                Direction::behind, Direction::above, Direction::below}) {
                auto it = s.nearest.find(d);
                if (it == s.nearest.end()) continue;
                if (!first) out << "; ";
                first = false;
                out << to_string(d) << ": Obj " << it->second;
            }
            out << "\n";
        }
    }
    summary.text = out.str();
    return summary;
}

std::string QueryAnswer::to_text() const {
    switch (type) {
        case Type::boolean:
            return yes ? "yes" : "no";
        case Type::id_list: {
            if (ids.empty()) return "none";
            std::string s;
            for (size_t i = 0; i < ids.size(); ++i) {
                if (i) s += " ";
                s += std::to_string(ids[i]);
            }
            return s;
        }
        case Type::number:
        default: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f", value + 0.0);
            std::string s = buf;
            if (!unit.empty()) s += " " + unit;
            return s;
        }
    }
}

namespace {

int parse_axis_token(const std::string& tok) {
    if (tok == "axis=x" || tok == "x") return 0;
    if (tok == "axis=y" || tok == "y") return 1;
    if (tok == "axis=z" || tok == "z") return 2;
    throw std::invalid_argument("bad axis selector: " + tok);
}

Direction parse_direction(const std::string& tok) {
    for (Direction d : {Direction::left, Direction::right, Direction::front, Direction::behind,
                        Direction::above, Direction::below})
        if (tok == to_string(d)) return d;
    throw std::invalid_argument("bad relation: " + tok);
}

int parse_id(const std::string& tok) {
    try {
        size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad object id: " + tok);
    }
}

}  // namespace

MetricQuery parse_query(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.empty()) throw std::invalid_argument("empty query");

    MetricQuery q;
    const std::string& kind = tok[0];
    auto need = [&](size_t n) {
        if (tok.size() < n) throw std::invalid_argument("query too short: " + line);
    };
    if (kind == "distance") {
        need(3);
        q.a = parse_id(tok[1]);
        q.b = parse_id(tok[2]);
        if (tok.size() > 3) {
            q.kind = QueryKind::distance_axis;
            q.axis = parse_axis_token(tok[3]);
        } else {
            q.kind = QueryKind::distance;
        }
    } else if (kind == "size") {
        need(2);
        q.kind = QueryKind::size;
        q.a = parse_id(tok[1]);
        q.axis = tok.size() > 2 ? parse_axis_token(tok[2]) : 0;  // width by default
    } else if (kind == "tilt") {
        need(2);
        q.a = parse_id(tok[1]);
        if (tok.size() > 2) {
            q.kind = QueryKind::tilt_axis;
            q.axis = parse_axis_token(tok[2]);
        } else {
            q.kind = QueryKind::tilt;
        }
    } else if (kind == "angle_between") {
        need(3);
        q.kind = QueryKind::angle_between;
        q.a = parse_id(tok[1]);
        q.b = parse_id(tok[2]);
        q.axis = tok.size() > 3 ? parse_axis_token(tok[3]) : 2;  // z by default
    } else if (kind == "relation") {
        need(4);
        q.kind = QueryKind::relation;
        q.a = parse_id(tok[1]);
        q.b = parse_id(tok[2]);
        q.relation = parse_direction(tok[3]);
    } else if (kind == "count" || kind == "which") {
        need(2);
        q.kind = QueryKind::count_predicate;
        q.list_ids = kind == "which";
        if (tok[1] != "upright" && tok[1] != "tilted")
            throw std::invalid_argument("bad predicate: " + tok[1]);
        q.predicate = tok[1];
    } else {
        throw std::invalid_argument("unknown query kind: " + kind);
    }
    return q;
}

namespace {

double tilt_of(const CanonicalFrame& frame, const ObjectInstance& obj) {
    const Vec3 z_world = frame.mapping * obj.obb.axis(2);
    const double c = std::clamp(z_world.dot(Vec3(0, 0, 1)), -1.0, 1.0);
    return rad_to_deg(std::acos(c));
}

}  // namespace

QueryAnswer answer_metric_query(const Scene3D& scene, const MetricQuery& q,
                                double upright_threshold_deg) {
    const CanonicalFrame frame = canonical_axes(scene.shot_angle);
    QueryAnswer ans;

    switch (q.kind) {
        case QueryKind::distance: {
            const auto& a = scene.object_by_id(q.a);
            const auto& b = scene.object_by_id(q.b);
            ans.value = (a.position - b.position).norm();
            ans.unit = "cm";
            break;
        }
        case QueryKind::distance_axis: {
            const auto& a = scene.object_by_id(q.a);
            const auto& b = scene.object_by_id(q.b);
            const Vec3 off = frame.to_world(a.position) - frame.to_world(b.position);
            ans.value = std::abs(off[q.axis]);
            ans.unit = "cm";
            break;
        }
        case QueryKind::size: {
            const auto& a = scene.object_by_id(q.a);
            ans.value = 2.0 * a.obb.half_extents[q.axis];
            ans.unit = "cm";
            break;
        }
        case QueryKind::tilt: {
            ans.value = tilt_of(frame, scene.object_by_id(q.a));
            ans.unit = "deg";
            break;
        }
        case QueryKind::tilt_axis: {
            const auto& a = scene.object_by_id(q.a);
            const Vec3 axis = Vec3::Unit(q.axis);
            const Vec3 z_world = frame.mapping * a.obb.axis(2);
            Vec3 zp = z_world - z_world.dot(axis) * axis;
            Vec3 up = Vec3(0, 0, 1) - Vec3(0, 0, 1).dot(axis) * axis;
            if (zp.norm() < 1e-12 || up.norm() < 1e-12) {
                ans.value = 0.0;  // projection degenerates (axis = up)
            } else {
                const double c = std::clamp(zp.normalized().dot(up.normalized()), -1.0, 1.0);
                ans.value = rad_to_deg(std::acos(c));
            }
            ans.unit = "deg";
            break;
        }
        case QueryKind::angle_between: {
            const auto& a = scene.object_by_id(q.a);
            const auto& b = scene.object_by_id(q.b);
            const Vec3 va = frame.mapping * a.obb.axis(q.axis);
            const Vec3 vb = frame.mapping * b.obb.axis(q.axis);
            const double c = std::clamp(va.dot(vb), -1.0, 1.0);
            ans.value = rad_to_deg(std::acos(c));
            ans.unit = "deg";
            break;
        }
        case QueryKind::relation: {
            const auto& a = scene.object_by_id(q.a);
            const auto& b = scene.object_by_id(q.b);
            const Vec3 off = frame.to_world(a.position) - frame.to_world(b.position);
            ans.type = QueryAnswer::Type::boolean;
            ans.yes = dominant_direction(off) == q.relation;
            break;
        }
        case QueryKind::count_predicate: {
            std::vector<int> hits;
            for (const auto& obj : scene.objects) {
                const double tilt = tilt_of(frame, obj);
                const bool upright = tilt <= upright_threshold_deg;
                if ((q.predicate == "upright") == upright) hits.push_back(obj.id);
            }
            if (q.list_ids) {
                ans.type = QueryAnswer::Type::id_list;
                ans.ids = std::move(hits);
            } else {
                ans.value = static_cast<double>(hits.size());
            }
            break;
        }
    }
    return ans;
}

namespace {

Mat3 camera_delta_matrix(const Vec3& per_axis_deg) {
    // Z-Y-X composition about the world axes.
    return (Eigen::AngleAxisd(deg_to_rad(per_axis_deg.z()), Vec3::UnitZ()) *
            Eigen::AngleAxisd(deg_to_rad(per_axis_deg.y()), Vec3::UnitY()) *
            Eigen::AngleAxisd(deg_to_rad(per_axis_deg.x()), Vec3::UnitX()))
        .toRotationMatrix();
}

Vec3 euler_zyx_deg_of(const Mat3& r) {
    // R = Rz(yaw) Ry(pitch) Rx(roll)
    double yaw, pitch, roll;
    const double sp = -r(2, 0);
    if (std::abs(sp) > 1.0 - 1e-12) {
        pitch = sp > 0 ? kPi / 2 : -kPi / 2;
        roll = 0.0;
        yaw = std::atan2(-r(0, 1), r(1, 1));
    } else {
        pitch = std::asin(sp);
        yaw = std::atan2(r(1, 0), r(0, 0));
        roll = std::atan2(r(2, 1), r(2, 2));
    }
    return {rad_to_deg(yaw), rad_to_deg(pitch), rad_to_deg(roll)};
}

double tilt_of_axis(const Vec3& z_world) {
    const double c = std::clamp(z_world.dot(Vec3(0, 0, 1)), -1.0, 1.0);
    return rad_to_deg(std::acos(c));
}

}  // namespace

SceneDiff diff_scenes(const Scene3D& before, const Scene3D& after,
                      const std::optional<CameraDelta>& camera_delta) {
    // Everything is expressed in the before-scene's canonical world frame;
    // the camera delta carries the after camera into it.
    const Mat3 m = canonical_axes(before.shot_angle).mapping;
    const Mat3 r_delta =
        camera_delta ? camera_delta_matrix(camera_delta->per_axis_deg) : Mat3::Identity();

    SceneDiff diff;
    if (camera_delta) diff.camera_delta_deg = camera_delta->per_axis_deg;

    for (const auto& obj_b : before.objects) {
        if (!after.has_object(obj_b.id)) continue;
        const auto& obj_a = after.object_by_id(obj_b.id);

        ObjectDiff d;
        d.id = obj_b.id;
        d.apparent_translation_cam = obj_a.position - obj_b.position;
        d.apparent_translation_world = m * d.apparent_translation_cam;
        d.translation_world = r_delta * (m * obj_a.position) - m * obj_b.position;
        d.total_distance = d.translation_world.norm();

        const Mat3 q_before = m * obj_b.rotation.toRotationMatrix();
        const Mat3 q_after = r_delta * m * obj_a.rotation.toRotationMatrix();
        const Mat3 r_rel = q_after * q_before.transpose();

        const double tr = std::clamp((r_rel.trace() - 1.0) / 2.0, -1.0, 1.0);
        d.rotation_angle_deg = rad_to_deg(std::acos(tr));
        if (d.rotation_angle_deg > 1e-9) {
            const Eigen::AngleAxisd aa(r_rel);
            d.rotation_axis = aa.axis();
            if (rad_to_deg(aa.angle()) < 0) d.rotation_axis = -d.rotation_axis;
        }
        d.euler_zyx_deg = euler_zyx_deg_of(r_rel);

        const Vec3 zb = m * obj_b.obb.axis(2);
        const Vec3 za = r_delta * (m * obj_a.obb.axis(2));
        d.tilt_change_deg = tilt_of_axis(za) - tilt_of_axis(zb);

        diff.objects.push_back(std::move(d));
    }
    if (diff.objects.empty())
        throw std::invalid_argument("the two scenes share no object ids");
    std::sort(diff.objects.begin(), diff.objects.end(),
              [](const ObjectDiff& a, const ObjectDiff& b) { return a.id < b.id; });
    return diff;
}

}  // namespace scene3d
