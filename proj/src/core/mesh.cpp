#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace boojum {

namespace {

struct SurfaceMesh {
    std::vector<Vec3> vertices;               // on the unit sphere
    std::vector<std::array<int, 3>> faces;    // ccw seen from outside
};

// Polar orientation: vertices 0 and 11 sit exactly on (0,0,+-1), so the
// poles survive as mesh vertices at every subdivision level.
SurfaceMesh icosahedron() {
    const double z = 1.0 / std::sqrt(5.0);
    const double r = 2.0 / std::sqrt(5.0);
    std::vector<Vec3> v;
    v.push_back({0, 0, 1});
    for (int k = 0; k < 5; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 5.0;
        v.push_back({r * std::cos(th), r * std::sin(th), z});
    }
    for (int k = 0; k < 5; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 5.0 + std::numbers::pi / 5.0;
        v.push_back({r * std::cos(th), r * std::sin(th), -z});
    }
    v.push_back({0, 0, -1});
    std::vector<std::array<int, 3>> f;
    for (int k = 0; k < 5; ++k) {
        const int k1 = (k + 1) % 5;
        f.push_back({0, 1 + k, 1 + k1});
        f.push_back({1 + k1, 1 + k, 6 + k});
        f.push_back({6 + k, 6 + k1, 1 + k1});
        f.push_back({11, 6 + k1, 6 + k});
    }
    return {std::move(v), std::move(f)};
}

SurfaceMesh subdivide(const SurfaceMesh& in) {
    SurfaceMesh out;
    out.vertices = in.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(out.vertices.size());
        out.vertices.push_back((in.vertices[a] + in.vertices[b]).normalized());
        midpoint.emplace(key, id);
        return id;
    };
    out.faces.reserve(in.faces.size() * 4);
    for (const auto& f : in.faces) {
        const int ab = mid(f[0], f[1]);
        const int bc = mid(f[1], f[2]);
        const int ca = mid(f[2], f[0]);
        out.faces.push_back({f[0], ab, ca});
        out.faces.push_back({f[1], bc, ab});
        out.faces.push_back({f[2], ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return triple(b - a, c - a, d - a) / 6.0;
}

} // namespace

int BallMesh::shell_vertex(int layer, int s) const {
    return 1 + (layer - 1) * surface_count_ + s;
}

double BallMesh::total_volume() const {
    double v = 0.0;
    for (const double t : tet_volume) v += t;
    return v;
}

double BallMesh::total_area() const {
    double a = 0.0;
    for (const auto& t : boundary_tris) {
        const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
        const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
        a += 0.5 * e1.cross(e2).norm();
    }
    return a;
}

BallMesh build_ball_mesh(int surface_level, int radial_layers) {
    if (surface_level < 0 || surface_level > 5) {
        throw InvalidParameter("surface_level must be in [0,5]");
    }
    if (radial_layers < 1 || radial_layers > 64) {
        throw InvalidParameter("radial_layers must be in [1,64]");
    }

    SurfaceMesh surf = icosahedron();
    for (int l = 0; l < surface_level; ++l) surf = subdivide(surf);
    // Enforce outward orientation of every surface face.
    for (auto& f : surf.faces) {
        const Vec3& a = surf.vertices[f[0]];
        const Vec3& b = surf.vertices[f[1]];
        const Vec3& c = surf.vertices[f[2]];
        if (triple(a, b, c) < 0.0) std::swap(f[1], f[2]);
    }

    BallMesh mesh;
    mesh.surface_level = surface_level;
    mesh.radial_layers = radial_layers;
    mesh.surface_count_ = static_cast<int>(surf.vertices.size());

    const int ns = mesh.surface_count_;
    const int R = radial_layers;
    mesh.vertices.resize(1 + static_cast<size_t>(ns) * R);
    mesh.vertices[0] = Vec3{0, 0, 0};
    for (int k = 1; k <= R; ++k) {
        const double r = static_cast<double>(k) / R;
        for (int s = 0; s < ns; ++s) {
            mesh.vertices[mesh.shell_vertex(k, s)] = surf.vertices[s] * r;
        }
    }

    // Innermost fan: center vertex to each face of shell 1.
    for (const auto& f : surf.faces) {
        mesh.tets.push_back({0, mesh.shell_vertex(1, f[0]),
                             mesh.shell_vertex(1, f[1]),
                             mesh.shell_vertex(1, f[2])});
    }
    // Prisms between consecutive shells, each split into three tets. The quad
    // diagonals are keyed on surface vertex ids so neighboring prisms agree.
    for (int k = 1; k < R; ++k) {
        for (const auto& f : surf.faces) {
            int s[3] = {f[0], f[1], f[2]};
            // Rotate so the smallest surface id leads.
            int m = 0;
            if (s[1] < s[m]) m = 1;
            if (s[2] < s[m]) m = 2;
            const int p0 = s[m], p1 = s[(m + 1) % 3], p2 = s[(m + 2) % 3];
            const int v0 = mesh.shell_vertex(k, p0);
            const int v1 = mesh.shell_vertex(k, p1);
            const int v2 = mesh.shell_vertex(k, p2);
            const int w0 = mesh.shell_vertex(k + 1, p0);
            const int w1 = mesh.shell_vertex(k + 1, p1);
            const int w2 = mesh.shell_vertex(k + 1, p2);
            if (p1 < p2) {
                mesh.tets.push_back({v0, v1, v2, w2});
                mesh.tets.push_back({v0, v1, w2, w1});
                mesh.tets.push_back({v0, w1, w2, w0});
            } else {
                mesh.tets.push_back({v0, v1, v2, w1});
                mesh.tets.push_back({v0, w1, v2, w2});
                mesh.tets.push_back({v0, w1, w2, w0});
            }
        }
    }

    for (const auto& f : surf.faces) {
        mesh.boundary_tris.push_back({mesh.shell_vertex(R, f[0]),
                                      mesh.shell_vertex(R, f[1]),
                                      mesh.shell_vertex(R, f[2])});
    }

    const int nv = mesh.vertex_count();
    mesh.is_boundary.assign(nv, 0);
    mesh.vertex_normal.assign(nv, Vec3{0, 0, 0});
    for (int s = 0; s < ns; ++s) {
        const int id = mesh.shell_vertex(R, s);
        mesh.is_boundary[id] = 1;
        mesh.vertex_normal[id] = mesh.vertices[id].normalized();
        mesh.boundary_vertex_ids.push_back(id);
    }

    mesh.tet_volume.resize(mesh.tets.size());
    mesh.grad_basis.resize(mesh.tets.size());
    mesh.lumped_volume.assign(nv, 0.0);
    mesh.lumped_area.assign(nv, 0.0);
    for (size_t t = 0; t < mesh.tets.size(); ++t) {
        auto& tet = mesh.tets[t];
        double vol = tet_signed_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                                       mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
        if (vol < 0.0) {
            std::swap(tet[2], tet[3]);
            vol = -vol;
        }
        mesh.tet_volume[t] = vol;
        const Vec3 e1 = mesh.vertices[tet[1]] - mesh.vertices[tet[0]];
        const Vec3 e2 = mesh.vertices[tet[2]] - mesh.vertices[tet[0]];
        const Vec3 e3 = mesh.vertices[tet[3]] - mesh.vertices[tet[0]];
        const double det = triple(e1, e2, e3); // 6 vol
        // Rows of the inverse transpose of [e1 e2 e3].
        const Vec3 g1 = e2.cross(e3) / det;
        const Vec3 g2 = e3.cross(e1) / det;
        const Vec3 g3 = e1.cross(e2) / det;
        mesh.grad_basis[t] = {(g1 + g2 + g3) * -1.0, g1, g2, g3};
        for (int i = 0; i < 4; ++i) mesh.lumped_volume[tet[i]] += vol / 4.0;
    }
    for (const auto& f : mesh.boundary_tris) {
        const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        const double area = 0.5 * e1.cross(e2).norm();
        for (int i = 0; i < 3; ++i) mesh.lumped_area[f[i]] += area / 3.0;
    }
    return mesh;
}

std::vector<std::string> validate_mesh(const BallMesh& mesh) {
    std::vector<std::string> failures;
    auto fail = [&](const std::string& msg) { failures.push_back(msg); };

    const int nv = mesh.vertex_count();
    if (static_cast<int>(mesh.is_boundary.size()) != nv ||
        static_cast<int>(mesh.vertex_normal.size()) != nv ||
        static_cast<int>(mesh.lumped_volume.size()) != nv ||
        static_cast<int>(mesh.lumped_area.size()) != nv) {
        fail("per-vertex arrays not sized to the vertex count");
        return failures;
    }

    for (size_t t = 0; t < mesh.tets.size(); ++t) {
        if (!(mesh.tet_volume[t] > 0.0)) {
            fail("tet " + std::to_string(t) + " has non-positive volume");
        }
        const auto& g = mesh.grad_basis[t];
        const Vec3 sum = g[0] + g[1] + g[2] + g[3];
        if (sum.norm() > 1e-12 * (g[1].norm() + g[2].norm() + g[3].norm() + 1.0)) {
            fail("tet " + std::to_string(t) + " basis gradients do not sum to zero");
        }
    }

    for (const int v : mesh.boundary_vertex_ids) {
        const Vec3& x = mesh.vertices[v];
        const Vec3& nu = mesh.vertex_normal[v];
        if (std::abs(x.norm() - 1.0) > 1e-12) {
            fail("boundary vertex " + std::to_string(v) + " is off the unit sphere");
        }
        if (std::abs(nu.norm() - 1.0) > 1e-12 || (x - nu).norm() > 1e-12) {
            fail("boundary vertex " + std::to_string(v) + " normal differs from x/|x|");
        }
    }

    // Conformity: every interior face shared by exactly two tets; boundary
    // faces are exactly the stored boundary triangles.
    std::map<std::array<int, 3>, int> face_count;
    auto face_key = [](int a, int b, int c) {
        std::array<int, 3> k = {a, b, c};
        std::sort(k.begin(), k.end());
        return k;
    };
    for (const auto& tet : mesh.tets) {
        face_count[face_key(tet[1], tet[2], tet[3])]++;
        face_count[face_key(tet[0], tet[2], tet[3])]++;
        face_count[face_key(tet[0], tet[1], tet[3])]++;
        face_count[face_key(tet[0], tet[1], tet[2])]++;
    }
    int boundary_faces = 0;
    for (const auto& [key, count] : face_count) {
        if (count == 1) {
            ++boundary_faces;
        } else if (count != 2) {
            fail("face shared by " + std::to_string(count) + " tets");
        }
    }
    if (boundary_faces != static_cast<int>(mesh.boundary_tris.size())) {
        fail("boundary face count mismatch: " + std::to_string(boundary_faces) +
             " single-sided faces vs " + std::to_string(mesh.boundary_tris.size()) +
             " boundary triangles");
    }
    for (const auto& f : mesh.boundary_tris) {
        auto it = face_count.find(face_key(f[0], f[1], f[2]));
        if (it == face_count.end() || it->second != 1) {
            fail("stored boundary triangle is not a single-sided tet face");
        }
        // Outward orientation.
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
        if (n.dot(a) <= 0.0) fail("boundary triangle oriented inward");
    }

    double lumped_vol = 0.0;
    for (const double v : mesh.lumped_volume) lumped_vol += v;
    if (std::abs(lumped_vol - mesh.total_volume()) > 1e-10 * std::max(1.0, mesh.total_volume())) {
        fail("lumped volumes do not sum to the mesh volume");
    }
    double lumped_area = 0.0;
    for (const double a : mesh.lumped_area) lumped_area += a;
    if (std::abs(lumped_area - mesh.total_area()) > 1e-10 * std::max(1.0, mesh.total_area())) {
        fail("lumped areas do not sum to the boundary area");
    }
    return failures;
}

Vec3 tangent_project(const BallMesh& mesh, int vertex, const Vec3& v) {
    if (vertex < 0 || vertex >= mesh.vertex_count() || !mesh.is_boundary[vertex]) {
        throw InvalidParameter("tangent_project requires a boundary vertex id");
    }
    const Vec3& nu = mesh.vertex_normal[vertex];
    return v - nu * v.dot(nu);
}

Vec3 boundary_retract(const BallMesh& mesh, int vertex, const Vec3& v, double delta) {
    const Vec3 p = tangent_project(mesh, vertex, v);
    const double n = p.norm();
    if (n < delta) {
        std::ostringstream os;
        os << "degenerate projection at boundary vertex " << vertex
           << ": |P(x) v| = " << n << " < " << delta;
        throw DegenerateProjection(os.str());
    }
    return p / n;
}

namespace {

void write_vtk_header(std::FILE* f, const BallMesh& mesh) {
    std::fprintf(f, "# vtk DataFile Version 2.0\n");
    std::fprintf(f, "boojum-ldg unit ball mesh level=%d layers=%d\n",
                 mesh.surface_level, mesh.radial_layers);
    std::fprintf(f, "ASCII\nDATASET UNSTRUCTURED_GRID\n");
    std::fprintf(f, "POINTS %d double\n", mesh.vertex_count());
    for (const auto& p : mesh.vertices) {
        std::fprintf(f, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    }
    const int nt = mesh.tet_count();
    std::fprintf(f, "CELLS %d %d\n", nt, 5 * nt);
    for (const auto& t : mesh.tets) {
        std::fprintf(f, "4 %d %d %d %d\n", t[0], t[1], t[2], t[3]);
    }
    std::fprintf(f, "CELL_TYPES %d\n", nt);
    for (int i = 0; i < nt; ++i) std::fprintf(f, "10\n");
}

} // namespace

void write_mesh_vtk(const BallMesh& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_vtk_header(f, mesh);
    std::fclose(f);
}

void write_fields_vtk(const BallMesh& mesh, const std::string& path,
                      const std::vector<VtkPointData>& point_data) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_vtk_header(f, mesh);
    if (!point_data.empty()) {
        std::fprintf(f, "POINT_DATA %d\n", mesh.vertex_count());
        for (const auto& pd : point_data) {
            if (pd.scalars.empty()) {
                std::fprintf(f, "VECTORS %s double\n", pd.name.c_str());
                for (const auto& v : pd.vectors) {
                    std::fprintf(f, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
                }
            } else {
                std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n",
                             pd.name.c_str());
                for (const double s : pd.scalars) std::fprintf(f, "%.17g\n", s);
            }
        }
    }
    std::fclose(f);
}

} // namespace boojum
