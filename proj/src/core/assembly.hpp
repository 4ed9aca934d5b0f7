#pragma once

#include "mesh.hpp"
#include "qtensor.hpp"

#include <vector>

namespace boojum {

// Nodal fields; one entry per mesh vertex.
using QTensorField = std::vector<QTensor>;
using S2Field = std::vector<Vec3>;

struct EnergyBreakdown {
    double elastic = 0.0;         // (1/2) sum vol |grad Q|^2
    double bulk_penalty = 0.0;    // lumped integral of f_bulk, >= 0
    double surface_penalty = 0.0; // lumped boundary integral of f_surface, >= 0
    double total = 0.0;           // elastic + (bulk + surface) / L
};

EnergyBreakdown energy_ldg(const QTensorField& field, const BallMesh& mesh,
                           const MaterialParams& params);

// Exact gradient of energy_ldg(...).total under the tr(AB) nodal pairing.
std::vector<QTensor> grad_ldg(const QTensorField& field, const BallMesh& mesh,
                              const MaterialParams& params);

// Dirichlet energy sum vol |grad u|^2 (no 1/2).
double energy_harmonic(const S2Field& u, const BallMesh& mesh);

// Exact gradient of energy_harmonic in the ambient nodal variables.
std::vector<Vec3> grad_harmonic(const S2Field& u, const BallMesh& mesh);

// sqrt( sum vol |grad(Q1-Q2)|^2 + sum lumped_vol |Q1-Q2|^2 ).
double h1_distance(const QTensorField& q1, const QTensorField& q2,
                   const BallMesh& mesh);

double max_q_norm(const QTensorField& field);

// Largest deviation of |u| from 1 over all vertices.
double max_unit_residual(const S2Field& u);

// Largest |u . nu| over boundary vertices.
double max_tangent_residual(const S2Field& u, const BallMesh& mesh);

} // namespace boojum
