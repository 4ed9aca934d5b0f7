#pragma once

#include "assembly.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace boojum {

struct SolveConfig {
    int max_iters = 100000;
    double grad_tol = 2e-7;   // on |projected grad| / sqrt(vertex count)
    double step_init = 1e-2;
    double bb_min = 1e-6;
    double bb_max = 1e2;
    double armijo_c = 1e-4;
    double proj_delta = 1e-6; // degeneracy threshold for the boundary retraction
    std::uint64_t seed = 1;

    void validate() const;
};

struct TraceRow {
    int iter = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

enum class SolveStatus { converged, max_iters };

struct SolveTrace {
    std::vector<TraceRow> rows;
    SolveStatus status = SolveStatus::max_iters;
    int repaired_count = 0; // boundary vertices re-seeded from neighbor averages
};

const char* to_string(SolveStatus status);

// Tangential two-boojum field: at (sin xi cos th, sin xi sin th, cos xi) the
// vector (-cos xi cos th, -cos xi sin th, sin xi); interior points use the
// formula at x/|x|, the center gets e3.
S2Field init_polar_tangent_field(const BallMesh& mesh);

// Uniaxial lift Q = s0 (u x u - I/3) per vertex.
QTensorField init_from_harmonic(const S2Field& u, const MaterialParams& params);

// Projected Barzilai-Borwein descent with Armijo backtracking for the
// Dirichlet energy over unit vectors, tangential on the boundary.
std::pair<S2Field, SolveTrace> minimize_harmonic(const S2Field& u0,
                                                 const BallMesh& mesh,
                                                 const SolveConfig& cfg);

// Unconstrained BB/Armijo descent on the full Landau-de Gennes energy.
std::pair<QTensorField, SolveTrace> minimize_ldg(const QTensorField& q0,
                                                 const BallMesh& mesh,
                                                 const MaterialParams& params,
                                                 const SolveConfig& cfg);

struct SweepRow {
    double L = 0.0;
    EnergyBreakdown energy;
    double h1_dist = 0.0; // to the uniaxial lift of the reference harmonic map
    double max_q = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    int iters = 0;
};

// Warm-started continuation over a strictly decreasing schedule of L. Each L
// starts from the lower-energy of {previous minimizer, uniaxial lift of
// u_ref}, so the comparison bound of the lift is inherited by every row.
std::vector<SweepRow> sweep_L(const std::vector<double>& schedule,
                              const BallMesh& mesh, const MaterialParams& base,
                              const SolveConfig& cfg, const S2Field& u_ref,
                              std::vector<SolveTrace>* traces = nullptr,
                              std::vector<QTensorField>* fields = nullptr);

} // namespace boojum
