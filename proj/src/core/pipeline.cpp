#include "pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace boojum {

namespace fs = std::filesystem;

std::optional<Stage> stage_from_name(const std::string& name) {
    if (name == "mesh") return Stage::mesh;
    if (name == "harmonic") return Stage::harmonic;
    if (name == "sweep") return Stage::sweep;
    if (name == "analyze") return Stage::analyze;
    if (name == "all") return Stage::all;
    return std::nullopt;
}

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::mesh: return "mesh";
        case Stage::harmonic: return "harmonic";
        case Stage::sweep: return "sweep";
        case Stage::analyze: return "analyze";
        case Stage::all: return "all";
    }
    return "unknown";
}

void write_trace_csv(const SolveTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fprintf(f, "iter,energy,grad_norm,step\n");
    for (const auto& row : trace.rows) {
        std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", row.iter, row.energy,
                     row.grad_norm, row.step);
    }
    std::fclose(f);
}

void write_energies_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fprintf(f, "L,elastic,bulk_penalty,surface_penalty,h1_distance\n");
    for (const auto& r : rows) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.L, r.energy.elastic,
                     r.energy.bulk_penalty, r.energy.surface_penalty, r.h1_dist);
    }
    std::fclose(f);
}

void write_monotonicity_csv(const std::vector<MonotonicityProfile>& profiles,
                            const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fprintf(f, "# monotonicity slack is an empirical convention calibrated on "
                    "the exact tangent-map sample per mesh\n");
    std::fprintf(f, "boojum_vertex,r,value,violation\n");
    for (const auto& p : profiles) {
        for (size_t i = 0; i < p.radii.size(); ++i) {
            std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", p.center_vertex, p.radii[i],
                         p.values[i], p.violation);
        }
    }
    std::fclose(f);
}

void save_s2field(const S2Field& u, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open " + path + " for writing");
    const char magic[8] = {'B', 'L', 'D', 'G', 'U', '1', '\n', 0};
    std::fwrite(magic, 1, 8, f);
    const std::uint64_t n = u.size();
    std::fwrite(&n, sizeof n, 1, f);
    for (const auto& v : u) {
        const double xyz[3] = {v.x, v.y, v.z};
        std::fwrite(xyz, sizeof(double), 3, f);
    }
    std::fclose(f);
}

std::optional<S2Field> load_s2field(const std::string& path, int expected_count) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    char magic[8] = {};
    std::uint64_t n = 0;
    if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, "BLDGU1\n", 7) != 0 ||
        std::fread(&n, sizeof n, 1, f) != 1 ||
        n != static_cast<std::uint64_t>(expected_count)) {
        std::fclose(f);
        return std::nullopt;
    }
    S2Field u(n);
    for (auto& v : u) {
        double xyz[3];
        if (std::fread(xyz, sizeof(double), 3, f) != 3) {
            std::fclose(f);
            return std::nullopt;
        }
        v = Vec3{xyz[0], xyz[1], xyz[2]};
    }
    std::fclose(f);
    return u;
}

namespace {

constexpr double kHardResidual = 1e-9;

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_writable_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string probe = join(dir, ".write_probe");
    std::FILE* f = std::fopen(probe.c_str(), "w");
    if (!f) throw IoError("output directory '" + dir + "' is not writable");
    std::fclose(f);
    fs::remove(probe, ec);
}

std::string format_l(double L) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", L);
    return buf;
}

struct StageContext {
    const RunConfig& cfg;
    std::string dir;
    std::optional<BallMesh> mesh;
    std::optional<S2Field> u;

    const BallMesh& get_mesh() {
        if (!mesh) {
            mesh = build_ball_mesh(cfg.surface_level, cfg.radial_layers);
            const auto failures = validate_mesh(*mesh);
            if (!failures.empty()) {
                throw NumericalError("mesh validation failed: " + failures.front());
            }
        }
        return *mesh;
    }

    // Converged tangential harmonic field, from the stage cache if available.
    const S2Field& get_harmonic(bool write_artifacts) {
        if (u) return *u;
        const BallMesh& m = get_mesh();
        const std::string cache = join(dir, "u_harmonic.dat");
        if (!write_artifacts) {
            if (auto loaded = load_s2field(cache, m.vertex_count())) {
                u = std::move(*loaded);
                return *u;
            }
        }
        auto [field, trace] = minimize_harmonic(init_polar_tangent_field(m), m,
                                                cfg.solver);
        if (trace.status != SolveStatus::converged) {
            throw NumericalError("harmonic solve did not converge within " +
                                 std::to_string(cfg.solver.max_iters) + " iterations");
        }
        if (max_unit_residual(field) > kHardResidual ||
            max_tangent_residual(field, m) > kHardResidual) {
            throw NumericalError("harmonic solve violated constraint maintenance");
        }
        save_s2field(field, cache);
        if (write_artifacts) {
            write_trace_csv(trace, join(dir, "trace.csv"));
            const DefectReport report = parity_and_report(field, m, 0.0);
            std::vector<double> marker(m.vertex_count(), 0.0);
            for (const auto& d : report.boundary) marker[d.vertex] = d.index;
            write_fields_vtk(m, join(dir, "u_harmonic.vtk"),
                             {{"u", field, {}}, {"defect_marker", {}, marker}});
        }
        u = std::move(field);
        return *u;
    }
};

void stage_mesh(StageContext& ctx) {
    write_mesh_vtk(ctx.get_mesh(), join(ctx.dir, "mesh.vtk"));
}

void stage_harmonic(StageContext& ctx) { ctx.get_harmonic(true); }

std::vector<SweepRow> stage_sweep(StageContext& ctx) {
    const BallMesh& mesh = ctx.get_mesh();
    const S2Field& u_ref = ctx.get_harmonic(false);
    const MaterialParams base = ctx.cfg.params_at(ctx.cfg.L_schedule.front());
    std::vector<QTensorField> fields;
    const auto rows = sweep_L(ctx.cfg.L_schedule, mesh, base, ctx.cfg.solver, u_ref,
                              nullptr, &fields);
    write_energies_csv(rows, join(ctx.dir, "energies.csv"));

    for (size_t i = 0; i < rows.size(); ++i) {
        const QTensorField& q = fields[i];
        std::vector<Vec3> director(mesh.vertex_count());
        std::vector<double> order(mesh.vertex_count());
        std::vector<double> biax(mesh.vertex_count());
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            const DirectorState ds = director_of(q[v]);
            director[v] = ds.n;
            order[v] = ds.s;
            biax[v] = ds.beta;
        }
        write_fields_vtk(mesh,
                         join(ctx.dir, "q_field_L" + format_l(rows[i].L) + ".vtk"),
                         {{"director", director, {}},
                          {"s", {}, order},
                          {"beta", {}, biax}});
    }
    return rows;
}

DefectReport stage_analyze(StageContext& ctx) {
    const BallMesh& mesh = ctx.get_mesh();
    const S2Field& u = ctx.get_harmonic(false);
    const DefectReport report = parity_and_report(u, mesh, 0.3);
    std::ofstream out(join(ctx.dir, "defects.json"));
    if (!out) throw IoError("cannot write defects.json");
    out << report.to_json();
    out.close();

    // Profile window [3h, 0.5] with h the finer of the boundary edge and the
    // radial spacing; clamped so coarse meshes still get a valid window.
    double h = 0.0;
    for (const auto& f : mesh.boundary_tris) {
        h += (mesh.vertices[f[1]] - mesh.vertices[f[0]]).norm();
    }
    h /= static_cast<double>(mesh.boundary_tris.size());
    h = std::min(h, 1.0 / mesh.radial_layers);
    const double r_lo = std::min(3.0 * h, 0.5);
    const double r_hi = std::min(1.0, std::max(0.5, r_lo + 0.25));
    std::vector<double> radii;
    for (int i = 0; i < 12; ++i) {
        radii.push_back(r_lo + (r_hi - r_lo) * i / 11.0);
    }
    std::vector<MonotonicityProfile> profiles;
    for (const auto& d : report.boundary) {
        profiles.push_back(monotonicity_profile(u, mesh, d.vertex, radii));
    }
    write_monotonicity_csv(profiles, join(ctx.dir, "monotonicity.csv"));
    return report;
}

void record_failure(const std::string& dir, const std::string& stage,
                    const std::string& message) {
    nlohmann::json j;
    j["stage"] = stage;
    j["error"] = message;
    std::ofstream out(join(dir, "failure.json"));
    if (out) out << j.dump(2) << "\n";
}

} // namespace

PipelineResult run_pipeline(const RunConfig& cfg, Stage stage) {
    PipelineResult result;
    std::string current = "setup";
    try {
        cfg.validate();
        ensure_writable_dir(cfg.output_dir);
        StageContext ctx{cfg, cfg.output_dir, std::nullopt, std::nullopt};

        if (stage == Stage::mesh || stage == Stage::all) {
            current = "mesh";
            stage_mesh(ctx);
        }
        if (stage == Stage::harmonic || stage == Stage::all) {
            current = "harmonic";
            stage_harmonic(ctx);
        }
        std::vector<SweepRow> sweep_rows;
        if (stage == Stage::sweep || stage == Stage::all) {
            current = "sweep";
            sweep_rows = stage_sweep(ctx);
            for (const auto& row : sweep_rows) {
                if (row.status != SolveStatus::converged) {
                    throw NumericalError("sweep did not converge at L = " +
                                         format_l(row.L));
                }
            }
        }
        if (stage == Stage::analyze || stage == Stage::all) {
            current = "analyze";
            const DefectReport report = stage_analyze(ctx);
            if (!report.index_consistent) {
                throw NumericalError("boundary index sum is " +
                                     std::to_string(report.index_sum) +
                                     ", expected 2");
            }
        }
    } catch (const std::exception& e) {
        result.ok = false;
        result.failed_stage = current;
        result.message = e.what();
        try {
            if (current != "setup") record_failure(cfg.output_dir, current, e.what());
        } catch (...) {
        }
    }
    return result;
}

} // namespace boojum
