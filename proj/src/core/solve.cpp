#include "solve.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace boojum {

void SolveConfig::validate() const {
    if (max_iters < 1) throw InvalidParameter("max_iters must be >= 1");
    if (!(grad_tol > 0.0)) throw InvalidParameter("grad_tol must be positive");
    if (!(step_init > 0.0)) throw InvalidParameter("step_init must be positive");
    if (!(bb_min > 0.0) || !(bb_max > 0.0) || bb_min > bb_max) {
        throw InvalidParameter("bb clamp must satisfy 0 < bb_min <= bb_max");
    }
    if (!(armijo_c > 0.0) || !(armijo_c < 1.0)) {
        throw InvalidParameter("armijo_c must lie in (0,1)");
    }
    if (!(proj_delta > 0.0)) throw InvalidParameter("proj_delta must be positive");
}

const char* to_string(SolveStatus status) {
    return status == SolveStatus::converged ? "converged" : "max_iters";
}

S2Field init_polar_tangent_field(const BallMesh& mesh) {
    S2Field u(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3& x = mesh.vertices[v];
        const double r = x.norm();
        if (r < 1e-14) {
            u[v] = Vec3{0, 0, 1};
            continue;
        }
        const Vec3 p = x / r;
        const double xi = std::acos(std::clamp(p.z, -1.0, 1.0));
        const double th = std::atan2(p.y, p.x);
        u[v] = Vec3{-std::cos(xi) * std::cos(th), -std::cos(xi) * std::sin(th),
                    std::sin(xi)};
    }
    return u;
}

QTensorField init_from_harmonic(const S2Field& u, const MaterialParams& params) {
    QTensorField q(u.size());
    for (size_t v = 0; v < u.size(); ++v) q[v] = uniaxial(u[v], params);
    return q;
}

namespace {

constexpr double kFieldTol = 1e-9;

std::vector<std::vector<int>> boundary_adjacency(const BallMesh& mesh) {
    std::vector<std::set<int>> nb(mesh.vertex_count());
    for (const auto& f : mesh.boundary_tris) {
        nb[f[0]].insert(f[1]); nb[f[0]].insert(f[2]);
        nb[f[1]].insert(f[0]); nb[f[1]].insert(f[2]);
        nb[f[2]].insert(f[0]); nb[f[2]].insert(f[1]);
    }
    std::vector<std::vector<int>> out(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        out[v].assign(nb[v].begin(), nb[v].end());
    }
    return out;
}

// Tangent of the constraint set: drop the component along u everywhere and
// additionally the component along nu on the boundary.
void project_gradient(std::vector<Vec3>& g, const S2Field& u, const BallMesh& mesh) {
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        Vec3 gv = g[v] - u[v] * g[v].dot(u[v]);
        if (mesh.is_boundary[v]) {
            const Vec3& nu = mesh.vertex_normal[v];
            gv -= nu * gv.dot(nu);
        }
        g[v] = gv;
    }
}

struct RetractOutcome {
    int repaired = 0;
};

// Last act of each iteration: pull every vertex back onto its constraint set.
// A boundary vertex whose tangential part degenerates is re-seeded from the
// average of its boundary neighbors in the pre-step field.
RetractOutcome retract_field(S2Field& w, const S2Field& before,
                             const BallMesh& mesh,
                             const std::vector<std::vector<int>>& adjacency,
                             double proj_delta) {
    RetractOutcome out;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (!mesh.is_boundary[v]) {
            const double n = w[v].norm();
            if (n < 1e-30) {
                throw NumericalError("vanishing interior direction at vertex " +
                                     std::to_string(v));
            }
            w[v] = w[v] / n;
            continue;
        }
        try {
            w[v] = boundary_retract(mesh, v, w[v], proj_delta);
        } catch (const DegenerateProjection&) {
            Vec3 avg{0, 0, 0};
            for (const int nb : adjacency[v]) avg += before[nb];
            const Vec3 p = tangent_project(mesh, v, avg);
            if (p.norm() < proj_delta) {
                std::ostringstream os;
                os << "unrepairable degenerate projection at boundary vertex " << v
                   << ": neighbor average is also degenerate";
                throw NumericalError(os.str());
            }
            w[v] = p / p.norm();
            ++out.repaired;
        }
    }
    return out;
}

double dot_fields(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
}

double dot_fields(const std::vector<QTensor>& a, const std::vector<QTensor>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
}

} // namespace

std::pair<S2Field, SolveTrace> minimize_harmonic(const S2Field& u0,
                                                 const BallMesh& mesh,
                                                 const SolveConfig& cfg) {
    cfg.validate();
    if (u0.size() != static_cast<size_t>(mesh.vertex_count())) {
        throw InvalidParameter("minimize_harmonic: field size mismatch");
    }
    if (max_unit_residual(u0) > kFieldTol) {
        throw InvalidParameter("minimize_harmonic: input is not a unit field");
    }
    if (max_tangent_residual(u0, mesh) > kFieldTol) {
        throw InvalidParameter("minimize_harmonic: input violates the tangential "
                               "boundary constraint");
    }

    const auto adjacency = boundary_adjacency(mesh);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(mesh.vertex_count()));

    S2Field u = u0;
    SolveTrace trace;
    double energy = energy_harmonic(u, mesh);
    std::vector<Vec3> grad = grad_harmonic(u, mesh);
    project_gradient(grad, u, mesh);
    double grad2 = dot_fields(grad, grad);
    trace.rows.push_back({0, energy, std::sqrt(grad2) * inv_sqrt_n, 0.0});

    S2Field prev_u;
    std::vector<Vec3> prev_grad;
    double step = cfg.step_init;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        if (std::sqrt(grad2) * inv_sqrt_n <= cfg.grad_tol) {
            trace.status = SolveStatus::converged;
            return {u, trace};
        }
        double t = cfg.step_init;
        if (!prev_u.empty()) {
            double ss = 0.0, sy = 0.0;
            for (size_t v = 0; v < u.size(); ++v) {
                const Vec3 s = u[v] - prev_u[v];
                const Vec3 y = grad[v] - prev_grad[v];
                ss += s.dot(s);
                sy += s.dot(y);
            }
            t = sy > 1e-300 ? std::clamp(ss / sy, cfg.bb_min, cfg.bb_max) : step;
        }

        bool accepted = false;
        S2Field trial;
        double trial_energy = 0.0;
        int repaired = 0;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            trial = u;
            for (size_t v = 0; v < u.size(); ++v) trial[v] -= grad[v] * t;
            const RetractOutcome ro =
                retract_field(trial, u, mesh, adjacency, cfg.proj_delta);
            trial_energy = energy_harmonic(trial, mesh);
            if (trial_energy <= energy - cfg.armijo_c * t * grad2) {
                accepted = true;
                repaired = ro.repaired;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // No admissible decrease left at this resolution.
            trace.status = std::sqrt(grad2) * inv_sqrt_n <= 10.0 * cfg.grad_tol
                               ? SolveStatus::converged
                               : SolveStatus::max_iters;
            return {u, trace};
        }

        prev_u = std::move(u);
        prev_grad = std::move(grad);
        u = std::move(trial);
        energy = trial_energy;
        step = t;
        trace.repaired_count += repaired;

        grad = grad_harmonic(u, mesh);
        project_gradient(grad, u, mesh);
        grad2 = dot_fields(grad, grad);
        trace.rows.push_back({iter, energy, std::sqrt(grad2) * inv_sqrt_n, t});
    }
    trace.status = SolveStatus::max_iters;
    return {u, trace};
}

std::pair<QTensorField, SolveTrace> minimize_ldg(const QTensorField& q0,
                                                 const BallMesh& mesh,
                                                 const MaterialParams& params,
                                                 const SolveConfig& cfg) {
    cfg.validate();
    if (q0.size() != static_cast<size_t>(mesh.vertex_count())) {
        throw InvalidParameter("minimize_ldg: field size mismatch");
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(mesh.vertex_count()));

    QTensorField q = q0;
    SolveTrace trace;
    double energy = energy_ldg(q, mesh, params).total;
    if (!std::isfinite(energy)) {
        throw NumericalError("minimize_ldg: non-finite energy at the initial field");
    }
    std::vector<QTensor> grad = grad_ldg(q, mesh, params);
    double grad2 = dot_fields(grad, grad);
    trace.rows.push_back({0, energy, std::sqrt(grad2) * inv_sqrt_n, 0.0});

    QTensorField prev_q;
    std::vector<QTensor> prev_grad;
    double step = cfg.step_init;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        if (std::sqrt(grad2) * inv_sqrt_n <= cfg.grad_tol) {
            trace.status = SolveStatus::converged;
            return {q, trace};
        }
        double t = cfg.step_init;
        if (!prev_q.empty()) {
            double ss = 0.0, sy = 0.0;
            for (size_t v = 0; v < q.size(); ++v) {
                const QTensor s = q[v] - prev_q[v];
                const QTensor y = grad[v] - prev_grad[v];
                ss += s.dot(s);
                sy += s.dot(y);
            }
            t = sy > 1e-300 ? std::clamp(ss / sy, cfg.bb_min, cfg.bb_max) : step;
        }

        bool accepted = false;
        QTensorField trial;
        double trial_energy = 0.0;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            trial = q;
            for (size_t v = 0; v < q.size(); ++v) trial[v] -= grad[v] * t;
            trial_energy = energy_ldg(trial, mesh, params).total;
            if (!std::isfinite(trial_energy)) {
                std::ostringstream os;
                os << "minimize_ldg: non-finite energy at iter " << iter
                   << ", step " << t;
                throw NumericalError(os.str());
            }
            if (trial_energy <= energy - cfg.armijo_c * t * grad2) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            trace.status = std::sqrt(grad2) * inv_sqrt_n <= 10.0 * cfg.grad_tol
                               ? SolveStatus::converged
                               : SolveStatus::max_iters;
            return {q, trace};
        }

        prev_q = std::move(q);
        prev_grad = std::move(grad);
        q = std::move(trial);
        energy = trial_energy;
        step = t;

        grad = grad_ldg(q, mesh, params);
        grad2 = dot_fields(grad, grad);
        trace.rows.push_back({iter, energy, std::sqrt(grad2) * inv_sqrt_n, t});
    }
    trace.status = SolveStatus::max_iters;
    return {q, trace};
}

std::vector<SweepRow> sweep_L(const std::vector<double>& schedule,
                              const BallMesh& mesh, const MaterialParams& base,
                              const SolveConfig& cfg, const S2Field& u_ref,
                              std::vector<SolveTrace>* traces,
                              std::vector<QTensorField>* fields) {
    if (schedule.empty()) throw InvalidParameter("sweep_L: empty schedule");
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) {
            throw InvalidParameter("sweep_L: schedule entries must be positive");
        }
        if (i > 0 && !(schedule[i] < schedule[i - 1])) {
            throw InvalidParameter("sweep_L: schedule must be strictly decreasing");
        }
    }

    const QTensorField q_ref = init_from_harmonic(u_ref, base);
    QTensorField warm = q_ref;
    std::vector<SweepRow> rows;
    rows.reserve(schedule.size());
    for (const double L : schedule) {
        const MaterialParams params = base.with_L(L);
        try {
            // Use the warm start only when it is at least as good as the
            // uniaxial lift, so every row inherits the lift comparison bound.
            const double e_warm = energy_ldg(warm, mesh, params).total;
            const double e_ref = energy_ldg(q_ref, mesh, params).total;
            const QTensorField& start = e_warm <= e_ref ? warm : q_ref;
            auto [q, trace] = minimize_ldg(start, mesh, params, cfg);
            SweepRow row;
            row.L = L;
            row.energy = energy_ldg(q, mesh, params);
            row.h1_dist = h1_distance(q, q_ref, mesh);
            row.max_q = max_q_norm(q);
            row.status = trace.status;
            row.iters = static_cast<int>(trace.rows.size()) - 1;
            rows.push_back(row);
            if (traces) traces->push_back(std::move(trace));
            if (fields) fields->push_back(q);
            warm = std::move(q);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "sweep_L failed at L = " << L << ": " << e.what();
            throw NumericalError(os.str());
        }
    }
    return rows;
}

} // namespace boojum
