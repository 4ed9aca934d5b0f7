#include "assembly.hpp"

#include "parallel.hpp"

#include <cmath>
#include <string>

namespace boojum {

namespace {

void require_sized(size_t field_size, const BallMesh& mesh, const char* what) {
    if (field_size != static_cast<size_t>(mesh.vertex_count())) {
        throw InvalidParameter(std::string(what) + ": field has " +
                               std::to_string(field_size) + " entries, mesh has " +
                               std::to_string(mesh.vertex_count()) + " vertices");
    }
}

// Constant per-tet gradient of the P1 interpolant, one QTensor per direction.
struct TetGradQ {
    QTensor d[3];
};

TetGradQ tet_grad(const QTensorField& field, const BallMesh& mesh, size_t t) {
    TetGradQ g;
    const auto& tet = mesh.tets[t];
    const auto& basis = mesh.grad_basis[t];
    for (int i = 0; i < 4; ++i) {
        const QTensor& q = field[tet[i]];
        const Vec3& b = basis[i];
        g.d[0] += q * b.x;
        g.d[1] += q * b.y;
        g.d[2] += q * b.z;
    }
    return g;
}

struct TetGradU {
    Vec3 d[3];
};

TetGradU tet_grad(const S2Field& u, const BallMesh& mesh, size_t t) {
    TetGradU g;
    const auto& tet = mesh.tets[t];
    const auto& basis = mesh.grad_basis[t];
    for (int i = 0; i < 4; ++i) {
        const Vec3& v = u[tet[i]];
        const Vec3& b = basis[i];
        g.d[0] += v * b.x;
        g.d[1] += v * b.y;
        g.d[2] += v * b.z;
    }
    return g;
}

} // namespace

EnergyBreakdown energy_ldg(const QTensorField& field, const BallMesh& mesh,
                           const MaterialParams& params) {
    require_sized(field.size(), mesh, "energy_ldg");
    const int nt = mesh.tet_count();
    std::vector<double> per_tet(nt);
    parallel_ranges(nt, [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const TetGradQ g = tet_grad(field, mesh, t);
            per_tet[t] = 0.5 * mesh.tet_volume[t] *
                         (g.d[0].norm2() + g.d[1].norm2() + g.d[2].norm2());
        }
    });
    EnergyBreakdown out;
    for (int t = 0; t < nt; ++t) out.elastic += per_tet[t];
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        out.bulk_penalty += mesh.lumped_volume[v] * f_bulk(field[v], params);
    }
    for (const int v : mesh.boundary_vertex_ids) {
        out.surface_penalty +=
            mesh.lumped_area[v] * f_surface(field[v], mesh.vertex_normal[v], params);
    }
    out.total = out.elastic + (out.bulk_penalty + out.surface_penalty) / params.L;
    return out;
}

std::vector<QTensor> grad_ldg(const QTensorField& field, const BallMesh& mesh,
                              const MaterialParams& params) {
    require_sized(field.size(), mesh, "grad_ldg");
    const int nt = mesh.tet_count();
    std::vector<std::array<QTensor, 4>> per_tet(nt);
    parallel_ranges(nt, [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const TetGradQ g = tet_grad(field, mesh, t);
            const double vol = mesh.tet_volume[t];
            const auto& basis = mesh.grad_basis[t];
            for (int i = 0; i < 4; ++i) {
                const Vec3& b = basis[i];
                per_tet[t][i] =
                    (g.d[0] * b.x + g.d[1] * b.y + g.d[2] * b.z) * vol;
            }
        }
    });
    std::vector<QTensor> grad(field.size());
    for (int t = 0; t < nt; ++t) {
        const auto& tet = mesh.tets[t];
        for (int i = 0; i < 4; ++i) grad[tet[i]] += per_tet[t][i];
    }
    const double invL = 1.0 / params.L;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        grad[v] += f_bulk_grad(field[v], params) * (mesh.lumped_volume[v] * invL);
    }
    for (const int v : mesh.boundary_vertex_ids) {
        grad[v] += f_surface_grad(field[v], mesh.vertex_normal[v], params) *
                   (mesh.lumped_area[v] * invL);
    }
    return grad;
}

double energy_harmonic(const S2Field& u, const BallMesh& mesh) {
    require_sized(u.size(), mesh, "energy_harmonic");
    const int nt = mesh.tet_count();
    std::vector<double> per_tet(nt);
    parallel_ranges(nt, [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const TetGradU g = tet_grad(u, mesh, t);
            per_tet[t] = mesh.tet_volume[t] *
                         (g.d[0].norm2() + g.d[1].norm2() + g.d[2].norm2());
        }
    });
    double e = 0.0;
    for (int t = 0; t < nt; ++t) e += per_tet[t];
    return e;
}

std::vector<Vec3> grad_harmonic(const S2Field& u, const BallMesh& mesh) {
    require_sized(u.size(), mesh, "grad_harmonic");
    const int nt = mesh.tet_count();
    std::vector<std::array<Vec3, 4>> per_tet(nt);
    parallel_ranges(nt, [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const TetGradU g = tet_grad(u, mesh, t);
            const double two_vol = 2.0 * mesh.tet_volume[t];
            const auto& basis = mesh.grad_basis[t];
            for (int i = 0; i < 4; ++i) {
                const Vec3& b = basis[i];
                per_tet[t][i] =
                    (g.d[0] * b.x + g.d[1] * b.y + g.d[2] * b.z) * two_vol;
            }
        }
    });
    std::vector<Vec3> grad(u.size());
    for (int t = 0; t < nt; ++t) {
        const auto& tet = mesh.tets[t];
        for (int i = 0; i < 4; ++i) grad[tet[i]] += per_tet[t][i];
    }
    return grad;
}

double h1_distance(const QTensorField& q1, const QTensorField& q2,
                   const BallMesh& mesh) {
    require_sized(q1.size(), mesh, "h1_distance");
    if (q1.size() != q2.size()) {
        throw InvalidParameter("h1_distance: field sizes differ");
    }
    QTensorField diff(q1.size());
    for (size_t v = 0; v < q1.size(); ++v) diff[v] = q1[v] - q2[v];
    double acc = 0.0;
    for (int t = 0; t < mesh.tet_count(); ++t) {
        const TetGradQ g = tet_grad(diff, mesh, t);
        acc += mesh.tet_volume[t] *
               (g.d[0].norm2() + g.d[1].norm2() + g.d[2].norm2());
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        acc += mesh.lumped_volume[v] * diff[v].norm2();
    }
    return std::sqrt(acc);
}

double max_q_norm(const QTensorField& field) {
    double m = 0.0;
    for (const auto& q : field) m = std::max(m, q.norm2());
    return std::sqrt(m);
}

double max_unit_residual(const S2Field& u) {
    double m = 0.0;
    for (const auto& v : u) m = std::max(m, std::abs(v.norm() - 1.0));
    return m;
}

double max_tangent_residual(const S2Field& u, const BallMesh& mesh) {
    double m = 0.0;
    for (const int v : mesh.boundary_vertex_ids) {
        m = std::max(m, std::abs(u[v].dot(mesh.vertex_normal[v])));
    }
    return m;
}

} // namespace boojum
