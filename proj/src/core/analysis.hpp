#pragma once

#include "assembly.hpp"

#include <string>
#include <vector>

namespace boojum {

struct InteriorDefect {
    int tet = -1;
    Vec3 centroid;
    int degree = 0;
    double residue = 0.0; // distance of the raw degree from the rounded integer
    bool unresolved = false;
};

// Per-tet discrete degree: summed signed spherical areas of the four image
// triangles over 4 pi. Tets with nonzero degree or residue >= 0.2 are listed.
std::vector<InteriorDefect> detect_interior_defects(const S2Field& u,
                                                    const BallMesh& mesh);

// Degree of u restricted to the triangulated sphere of shell `layer`; used to
// cross-check additivity of the interior degrees.
int shell_restriction_degree(const S2Field& u, const BallMesh& mesh, int layer);

struct BoundaryDefect {
    int vertex = -1;
    Vec3 position;
    int index = 0;
    int tangent_sign = 0;    // +1 / -1, 0 while unfit
    double fit_error = -1.0; // negative while unfit
};

struct BoundaryScan {
    std::vector<BoundaryDefect> defects; // nonzero net index, ascending vertex id
    int index_sum = 0;                   // over all boundary triangles
    bool consistent = false;             // index_sum == 2
    int unresolved = 0;                  // triangles with residue >= 0.2
};

// Winding of the tangential field relative to parallel transport around each
// oriented boundary triangle, closed by the enclosed spherical area. The
// triangles tile the boundary once, so the indices sum to the Euler
// characteristic 2 exactly; each triangle's index is localized to its corner
// with the highest surface Dirichlet density.
BoundaryScan detect_boundary_defects(const S2Field& u, const BallMesh& mesh);

struct TangentFit {
    int sign = 0;
    double fit_error = 0.0;
    int samples = 0;
};

// Compares u near a boundary singularity against +-y/|y| in the rotated frame
// whose third axis is the inward normal at the boojum.
TangentFit tangent_map_fit(const S2Field& u, const BallMesh& mesh,
                           int boojum_vertex, double r_fit);

struct MonotonicityProfile {
    int center_vertex = -1;
    std::vector<double> radii;
    std::vector<double> values; // (1/r) sum of vol |grad u|^2 over tets in B_r
    double violation = 0.0;     // max decrease between consecutive radii
};

MonotonicityProfile monotonicity_profile(const S2Field& u, const BallMesh& mesh,
                                         int center_vertex,
                                         const std::vector<double>& radii);

struct DefectReport {
    std::vector<InteriorDefect> interior;
    std::vector<BoundaryDefect> boundary;
    int n_int = 0;
    int n_bdy = 0;
    bool n_int_even = true;
    bool n_bdy_even = true;
    int index_sum = 0;
    bool index_consistent = false;
    int unresolved_interior = 0;
    int unresolved_boundary = 0;

    std::string to_json() const;
};

// Runs both detectors and fits the tangent map at every boundary defect;
// fit_radius <= 0 skips the fits. Parity is reported, never enforced.
DefectReport parity_and_report(const S2Field& u, const BallMesh& mesh,
                               double fit_radius = 0.3);

} // namespace boojum
