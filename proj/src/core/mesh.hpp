#pragma once

#include "errors.hpp"
#include "vec3.hpp"

#include <array>
#include <string>
#include <vector>

namespace boojum {

// Tetrahedral mesh of the unit ball: an icosphere boundary extruded radially
// through equally spaced shells down to a central vertex. Immutable once built.
struct BallMesh {
    int surface_level = 0;
    int radial_layers = 0;

    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;          // positively oriented
    std::vector<std::array<int, 3>> boundary_tris; // ccw seen from outside
    std::vector<int> boundary_vertex_ids;          // ascending
    std::vector<char> is_boundary;                 // per vertex
    std::vector<Vec3> vertex_normal;               // unit, zero for interior
    std::vector<double> tet_volume;
    std::vector<std::array<Vec3, 4>> grad_basis;   // P1 basis gradients per tet
    std::vector<double> lumped_volume;             // per vertex
    std::vector<double> lumped_area;               // per vertex, zero interior

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int tet_count() const { return static_cast<int>(tets.size()); }
    int boundary_vertex_count() const { return static_cast<int>(boundary_vertex_ids.size()); }

    double total_volume() const;
    double total_area() const;

    // Vertex id on shell `layer` (1..radial_layers) above surface vertex `s`.
    // The center vertex has id 0.
    int shell_vertex(int layer, int s) const;
    int surface_vertex_count() const { return surface_count_; }

    int surface_count_ = 0;
};

BallMesh build_ball_mesh(int surface_level, int radial_layers);

// Every violated invariant as a message; empty means the mesh is valid.
std::vector<std::string> validate_mesh(const BallMesh& mesh);

// P(x) v = v - (v . nu) nu at a boundary vertex.
Vec3 tangent_project(const BallMesh& mesh, int vertex, const Vec3& v);

// Nearest point of S^2 intersected with the tangent plane at the boundary
// vertex; throws DegenerateProjection when the tangential part is below delta.
Vec3 boundary_retract(const BallMesh& mesh, int vertex, const Vec3& v, double delta);

// Legacy ASCII VTK (version 2.0) unstructured grid writers.
void write_mesh_vtk(const BallMesh& mesh, const std::string& path);

struct VtkPointData {
    std::string name;
    std::vector<Vec3> vectors;    // used when scalars is empty
    std::vector<double> scalars;
};

void write_fields_vtk(const BallMesh& mesh, const std::string& path,
                      const std::vector<VtkPointData>& point_data);

} // namespace boojum
