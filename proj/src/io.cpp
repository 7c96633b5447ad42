#include "scene3d/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scene3d/mesh.hpp"
#include "scene3d/text_format.hpp"

namespace fs = std::filesystem;

namespace scene3d {

namespace {

// PNM header token reader: skips whitespace and '#' comments.
std::string pnm_token(std::istream& in, const std::string& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok += static_cast<char>(c);
    }
    if (tok.empty()) throw std::runtime_error(path + ": truncated PNM header");
    return tok;
}

std::string resolve_relative(const std::string& base_file, const std::string& path) {
    const fs::path p(path);
    if (p.is_absolute() || fs::exists(p)) return path;
    const fs::path joined = fs::path(base_file).parent_path() / p;
    return joined.string();
}

}  // namespace

BinaryMask load_pbm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mask file: " + path);
    if (pnm_token(in, path) != "P4") throw std::runtime_error(path + ": expected binary PBM (P4)");
    const int w = parse_int(pnm_token(in, path));
    const int h = parse_int(pnm_token(in, path));
    if (w <= 0 || h <= 0) throw std::runtime_error(path + ": bad PBM dimensions");
    // Single whitespace byte after the header, then packed bits.
    BinaryMask mask(w, h);
    const int row_bytes = (w + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < h; ++y) {
        if (!in.read(row.data(), row_bytes))
            throw std::runtime_error(path + ": truncated PBM data");
        for (int x = 0; x < w; ++x) {
            const unsigned byte = static_cast<unsigned char>(row[x / 8]);
            mask.set(x, y, (byte >> (7 - x % 8)) & 1);  // 1 = black = foreground
        }
    }
    return mask;
}

void save_pbm(const BinaryMask& mask, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mask file: " + path);
    out << "P4\n" << mask.width << " " << mask.height << "\n";
    const int row_bytes = (mask.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < mask.height; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) row[x / 8] |= static_cast<char>(1 << (7 - x % 8));
        out.write(row.data(), row_bytes);
    }
}

DepthMap load_pgm16_depth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open depth file: " + path);
    if (pnm_token(in, path) != "P5") throw std::runtime_error(path + ": expected binary PGM (P5)");
    const int w = parse_int(pnm_token(in, path));
    const int h = parse_int(pnm_token(in, path));
    const int maxval = parse_int(pnm_token(in, path));
    if (maxval != 65535)
        throw std::runtime_error(path + ": depth PGM must use maxval 65535 (millimeters)");
    DepthMap depth(w, h);
    std::vector<unsigned char> row(static_cast<size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        if (!in.read(reinterpret_cast<char*>(row.data()), row.size()))
            throw std::runtime_error(path + ": truncated PGM data");
        for (int x = 0; x < w; ++x) {
            const unsigned mm = (static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1];
            depth.at(x, y) = mm / 10.0;  // millimeters to centimeters
        }
    }
    return depth;
}

void save_pgm16_depth(const DepthMap& depth, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write depth file: " + path);
    out << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
    std::vector<unsigned char> row(static_cast<size_t>(depth.width) * 2);
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            const double mm = std::clamp(std::round(depth.at(x, y) * 10.0), 0.0, 65535.0);
            const unsigned v = static_cast<unsigned>(mm);
            row[2 * x] = static_cast<unsigned char>(v >> 8);
            row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
        }
        out.write(reinterpret_cast<char*>(row.data()), row.size());
    }
}

namespace {

struct Record {
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<Record> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<Record> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 'key: value'");
        Record r;
        r.key = line.substr(0, colon);
        const size_t start = line.find_first_not_of(' ', colon + 1);
        r.value = start == std::string::npos ? "" : line.substr(start);
        while (!r.value.empty() && (r.value.back() == '\r' || r.value.back() == ' '))
            r.value.pop_back();
        r.line = line_no;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, size_t n, const std::string& context) {
    const auto toks = split_ws(s);
    if (toks.size() != n)
        throw std::runtime_error(context + ": expected " + std::to_string(n) + " numbers");
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = parse_double(toks[i]);
    return v;
}

std::string vec_record(const Vec3& v) {
    return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

// key=value tokens on object lines; the value may not contain spaces.
std::string field_of(const std::vector<std::string>& tokens, const std::string& key,
                     const std::string& context, bool required = true) {
    for (const auto& t : tokens) {
        if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
    }
    if (required) throw std::runtime_error(context + ": missing field '" + key + "='");
    return "";
}

}  // namespace

CameraModel SceneManifest::camera() const {
    if (intrinsics) {
        const auto& k = *intrinsics;
        CameraModel cam{k[0], k[1], k[2], k[3], width, height};
        if (cam.fx <= 0 || cam.fy <= 0) throw std::runtime_error("focal lengths must be positive");
        return cam;
    }
    if (fov_v_deg) return CameraModel::from_vertical_fov(width, height, *fov_v_deg);
    throw std::runtime_error("manifest needs camera_fov_deg or camera_intrinsics");
}

SceneManifest load_manifest(const std::string& path) {
    SceneManifest m;
    bool have_schema = false;
    for (const auto& r : read_records(path)) {
        const std::string ctx = path + ":" + std::to_string(r.line);
        if (r.key == "schema") {
            if (parse_int(r.value) != 1) throw std::runtime_error(ctx + ": unsupported schema");
            have_schema = true;
        } else if (r.key == "kind") {
            if (r.value != "scene_manifest")
                throw std::runtime_error(ctx + ": expected kind: scene_manifest");
        } else if (r.key == "image") {
            const auto v = parse_doubles(r.value, 2, ctx);
            m.width = static_cast<int>(v[0]);
            m.height = static_cast<int>(v[1]);
        } else if (r.key == "camera_fov_deg") {
            m.fov_v_deg = parse_double(r.value);
        } else if (r.key == "camera_intrinsics") {
            const auto v = parse_doubles(r.value, 4, ctx);
            m.intrinsics = {v[0], v[1], v[2], v[3]};
        } else if (r.key == "depth") {
            m.depth_path = resolve_relative(path, r.value);
        } else if (r.key == "shot_angle") {
            m.shot_angle = shot_angle_from_string(r.value);
        } else if (r.key == "object") {
            const auto toks = split_ws(r.value);
            ManifestObject obj;
            obj.id = parse_int(field_of(toks, "id", ctx));
            obj.name = field_of(toks, "name", ctx);
            obj.mask_path = resolve_relative(path, field_of(toks, "mask", ctx));
            obj.mesh_path = resolve_relative(path, field_of(toks, "mesh", ctx));
            const std::string scale = field_of(toks, "scale", ctx, false);
            if (!scale.empty()) obj.initial_scale = parse_double(scale);
            m.objects.push_back(std::move(obj));
        } else {
            throw std::runtime_error(ctx + ": unknown manifest key '" + r.key + "'");
        }
    }
    if (!have_schema) throw std::runtime_error(path + ": missing schema field");
    if (m.width <= 0 || m.height <= 0) throw std::runtime_error(path + ": missing image size");
    if (m.depth_path.empty()) throw std::runtime_error(path + ": missing depth map");
    return m;
}

void save_scene(const Scene3D& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scene file: " + path);
    out << "schema: 1\n";
    out << "kind: scene\n";
    out << "camera: " << format_double(scene.camera.fx) << " " << format_double(scene.camera.fy)
        << " " << format_double(scene.camera.cx) << " " << format_double(scene.camera.cy) << " "
        << scene.camera.width << " " << scene.camera.height << "\n";
    out << "shot_angle: " << to_string(scene.shot_angle) << "\n";
    out << "background: " << vec_record(scene.background.point) << " "
        << vec_record(scene.background.normal) << " "
        << format_double(scene.background.half_width) << " "
        << format_double(scene.background.half_height) << "\n";
    out << "object_count: " << scene.objects.size() << "\n";
    for (const auto& o : scene.objects) {
        out << "object: id=" << o.id << " name=" << o.name << "\n";
        out << "position: " << vec_record(o.position) << "\n";
        out << "rotation: " << format_double(o.rotation.w()) << " "
            << format_double(o.rotation.x()) << " " << format_double(o.rotation.y()) << " "
            << format_double(o.rotation.z()) << "\n";
        out << "scale: " << format_double(o.scale) << "\n";
        out << "obb_center: " << vec_record(o.obb.center) << "\n";
        out << "obb_axis_x: " << vec_record(o.obb.axis(0)) << "\n";
        out << "obb_axis_y: " << vec_record(o.obb.axis(1)) << "\n";
        out << "obb_axis_z: " << vec_record(o.obb.axis(2)) << "\n";
        out << "obb_half_extents: " << vec_record(o.obb.half_extents) << "\n";
        out << "mesh: " << o.mesh_path << "\n";
        out << "off_plane: " << (o.placed_off_plane ? 1 : 0) << "\n";
    }
}

Scene3D load_scene(const std::string& path, bool require_meshes) {
    Scene3D scene;
    bool have_schema = false, have_camera = false;
    ObjectInstance* cur = nullptr;
    Vec3 bg_point = Vec3::Zero(), bg_normal = Vec3(0, 0, -1);
    double bg_hw = 1.0, bg_hh = 1.0;
    bool have_bg = false;

    for (const auto& r : read_records(path)) {
        const std::string ctx = path + ":" + std::to_string(r.line);
        if (r.key == "schema") {
            if (parse_int(r.value) != 1) throw std::runtime_error(ctx + ": unsupported schema");
            have_schema = true;
        } else if (r.key == "kind") {
            if (r.value != "scene") throw std::runtime_error(ctx + ": expected kind: scene");
        } else if (r.key == "camera") {
            const auto v = parse_doubles(r.value, 6, ctx);
            scene.camera = {v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                            static_cast<int>(v[5])};
            have_camera = true;
        } else if (r.key == "shot_angle") {
            scene.shot_angle = shot_angle_from_string(r.value);
        } else if (r.key == "background") {
            const auto v = parse_doubles(r.value, 8, ctx);
            bg_point = {v[0], v[1], v[2]};
            bg_normal = {v[3], v[4], v[5]};
            bg_hw = v[6];
            bg_hh = v[7];
            have_bg = true;
        } else if (r.key == "object_count") {
            scene.objects.reserve(static_cast<size_t>(parse_int(r.value)));
        } else if (r.key == "object") {
            const auto toks = split_ws(r.value);
            ObjectInstance obj;
            obj.id = parse_int(field_of(toks, "id", ctx));
            obj.name = field_of(toks, "name", ctx);
            scene.objects.push_back(std::move(obj));
            cur = &scene.objects.back();
        } else if (cur == nullptr) {
            throw std::runtime_error(ctx + ": unknown scene key '" + r.key + "'");
        } else if (r.key == "position") {
            const auto v = parse_doubles(r.value, 3, ctx);
            cur->position = {v[0], v[1], v[2]};
        } else if (r.key == "rotation") {
            const auto v = parse_doubles(r.value, 4, ctx);
            cur->rotation = Quat(v[0], v[1], v[2], v[3]).normalized();
        } else if (r.key == "scale") {
            cur->scale = parse_double(r.value);
        } else if (r.key == "obb_center") {
            const auto v = parse_doubles(r.value, 3, ctx);
            cur->obb.center = {v[0], v[1], v[2]};
        } else if (r.key == "obb_axis_x" || r.key == "obb_axis_y" || r.key == "obb_axis_z") {
            const auto v = parse_doubles(r.value, 3, ctx);
            const int col = r.key == "obb_axis_x" ? 0 : r.key == "obb_axis_y" ? 1 : 2;
            cur->obb.axes.col(col) = Vec3(v[0], v[1], v[2]);
        } else if (r.key == "obb_half_extents") {
            const auto v = parse_doubles(r.value, 3, ctx);
            cur->obb.half_extents = {v[0], v[1], v[2]};
        } else if (r.key == "mesh") {
            cur->mesh_path = r.value;
        } else if (r.key == "off_plane") {
            cur->placed_off_plane = parse_int(r.value) != 0;
        } else {
            throw std::runtime_error(ctx + ": unknown scene key '" + r.key + "'");
        }
    }
    if (!have_schema) throw std::runtime_error(path + ": missing schema field");
    if (!have_camera) throw std::runtime_error(path + ": missing camera record");
    if (have_bg)
        scene.background = Plane3D::make_with_axes(bg_point, bg_normal, bg_hw, bg_hh,
                                                   Vec3(1, 0, 0), Vec3(0, 1, 0));

    if (require_meshes) {
        for (auto& obj : scene.objects) {
            if (obj.mesh_path.empty())
                throw std::runtime_error("object " + std::to_string(obj.id) +
                                         ": scene file carries no mesh path");
            obj.mesh = load_obj(resolve_relative(path, obj.mesh_path));
        }
    }
    return scene;
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
    out << "schema: 1\n";
    out << "kind: trajectory\n";
    out << "columns: t x y z qw qx qy qz\n";
    out << "sample_count: " << traj.samples.size() << "\n";
    for (const auto& s : traj.samples) {
        out << "sample: " << format_double(s.t) << " " << vec_record(s.position) << " "
            << format_double(s.rotation.w()) << " " << format_double(s.rotation.x()) << " "
            << format_double(s.rotation.y()) << " " << format_double(s.rotation.z()) << "\n";
    }
    out << "waypoints:";
    for (size_t i : traj.waypoint_indices) out << " " << i;
    out << "\n";
}

Trajectory load_trajectory(const std::string& path) {
    Trajectory traj;
    bool have_schema = false;
    for (const auto& r : read_records(path)) {
        const std::string ctx = path + ":" + std::to_string(r.line);
        if (r.key == "schema") {
            if (parse_int(r.value) != 1) throw std::runtime_error(ctx + ": unsupported schema");
            have_schema = true;
        } else if (r.key == "kind") {
            if (r.value != "trajectory")
                throw std::runtime_error(ctx + ": expected kind: trajectory");
        } else if (r.key == "columns" || r.key == "sample_count") {
            // informative only
        } else if (r.key == "sample") {
            const auto v = parse_doubles(r.value, 8, ctx);
            TrajectorySample s;
            s.t = v[0];
            s.position = {v[1], v[2], v[3]};
            s.rotation = Quat(v[4], v[5], v[6], v[7]);
            traj.samples.push_back(std::move(s));
        } else if (r.key == "waypoints") {
            for (const auto& t : split_ws(r.value))
                traj.waypoint_indices.push_back(static_cast<size_t>(parse_int(t)));
        } else {
            throw std::runtime_error(ctx + ": unknown trajectory key '" + r.key + "'");
        }
    }
    if (!have_schema) throw std::runtime_error(path + ": missing schema field");
    return traj;
}

}  // namespace scene3d
