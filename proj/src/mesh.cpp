#include "scene3d/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scene3d {

double TriMesh::bounding_radius() const {
    double r2 = 0.0;
    for (const auto& v : vertices) r2 = std::max(r2, v.squaredNorm());
    return std::sqrt(r2);
}

Aabb TriMesh::bounds() const {
    Aabb box;
    for (const auto& v : vertices) box.expand(v);
    return box;
}

namespace {

int parse_face_index(const std::string& token, size_t vertex_count, const std::string& name,
                     int line_no) {
    // "7", "7/1", "7//3", "7/1/3" all reference vertex 7.
    const std::string head = token.substr(0, token.find('/'));
    int idx = 0;
    try {
        idx = std::stoi(head);
    } catch (const std::exception&) {
        throw std::runtime_error(name + ":" + std::to_string(line_no) + ": bad face index '" +
                                 token + "'");
    }
    if (idx < 0) idx = static_cast<int>(vertex_count) + idx + 1;  // relative indexing
    if (idx < 1 || static_cast<size_t>(idx) > vertex_count)
        throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                 ": face index out of range");
    return idx - 1;
}

}  // namespace

TriMesh parse_obj(std::istream& in, const std::string& name) {
    TriMesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z))
                throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                         ": malformed vertex");
            if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
                throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                         ": non-finite vertex");
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<std::string> tokens;
            std::string t;
            while (ss >> t) tokens.push_back(t);
            if (tokens.size() != 3)
                throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                         ": only triangular faces are supported");
            std::array<int, 3> tri;
            for (int i = 0; i < 3; ++i)
                tri[i] = parse_face_index(tokens[i], mesh.vertices.size(), name, line_no);
            mesh.triangles.push_back(tri);
        }
        // Other records (vn, vt, o, g, s, usemtl, ...) are ignored.
    }
    if (mesh.triangles.empty())
        throw std::runtime_error(name + ": mesh has no triangles");
    return mesh;
}

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return parse_obj(in, path);
}

void save_obj(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mesh file: " + path);
    out.precision(17);
    for (const auto& v : mesh.vertices)
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

TriMesh make_box_mesh(double size_x, double size_y, double size_z) {
    TriMesh m;
    const double hx = size_x / 2, hy = size_y / 2, hz = size_z / 2;
    for (int i = 0; i < 8; ++i)
        m.vertices.emplace_back(i & 1 ? hx : -hx, i & 2 ? hy : -hy, i & 4 ? hz : -hz);
    const int faces[12][3] = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6},
                              {0, 1, 4}, {1, 5, 4}, {2, 6, 3}, {3, 6, 7},
                              {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
    for (const auto& f : faces) m.triangles.push_back({f[0], f[1], f[2]});
    return m;
}

TriMesh make_l_mesh(double arm_a, double arm_b, double thickness, double depth) {
    // Two boxes sharing the corner at the origin: a horizontal arm along +x and
    // a vertical arm along +z, extruded along y. Offset so the shape straddles
    // the origin rather than sitting in one octant.
    TriMesh horiz = make_box_mesh(arm_a, depth, thickness);
    TriMesh vert = make_box_mesh(thickness, depth, arm_b);
    TriMesh m;
    const Vec3 shift(-arm_a / 4, 0, -arm_b / 4);
    for (const auto& v : horiz.vertices)
        m.vertices.emplace_back(v + Vec3(arm_a / 2 - thickness / 2, 0, 0) + shift);
    for (const auto& t : horiz.triangles) m.triangles.push_back(t);
    const int base = static_cast<int>(m.vertices.size());
    for (const auto& v : vert.vertices) m.vertices.emplace_back(v + Vec3(0, 0, arm_b / 2) + shift);
    for (const auto& t : vert.triangles)
        m.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    return m;
}

}  // namespace scene3d
