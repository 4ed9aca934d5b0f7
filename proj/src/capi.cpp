#include "boojum_ldg.h"

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/pipeline.hpp"

#include <cstring>
#include <string>

using namespace boojum;

struct bldg_params {
    MaterialParams value;
};
struct bldg_mesh {
    BallMesh value;
};
struct bldg_s2field {
    S2Field value;
};
struct bldg_qfield {
    QTensorField value;
};
struct bldg_trace {
    SolveTrace value;
};
struct bldg_report {
    DefectReport value;
};
struct bldg_config {
    RunConfig value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
bldg_status guarded(F&& f) {
    try {
        f();
        return BLDG_OK;
    } catch (const InvalidParameter& e) {
        set_error(e.what());
        return BLDG_ERR_INVALID_ARGUMENT;
    } catch (const ParseError& e) {
        set_error(e.what());
        return BLDG_ERR_PARSE;
    } catch (const IoError& e) {
        set_error(e.what());
        return BLDG_ERR_IO;
    } catch (const DegenerateProjection& e) {
        set_error(e.what());
        return BLDG_ERR_DEGENERATE_PROJECTION;
    } catch (const NumericalError& e) {
        set_error(e.what());
        return BLDG_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return BLDG_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return BLDG_ERR_INTERNAL;
    }
}

bldg_status require(bool ok, const char* msg) {
    if (ok) return BLDG_OK;
    set_error(msg);
    return BLDG_ERR_INVALID_ARGUMENT;
}

SolveConfig to_solve_config(const bldg_solve_options* opts) {
    SolveConfig cfg;
    if (opts) {
        cfg.max_iters = opts->max_iters;
        cfg.grad_tol = opts->grad_tol;
        cfg.step_init = opts->step_init;
        cfg.bb_min = opts->bb_min;
        cfg.bb_max = opts->bb_max;
        cfg.armijo_c = opts->armijo_c;
        cfg.proj_delta = opts->proj_delta;
        cfg.seed = opts->seed;
    }
    return cfg;
}

} // namespace

extern "C" {

const char* bldg_version(void) { return "1.0.0"; }

const char* bldg_last_error(void) { return g_last_error.c_str(); }

bldg_status bldg_params_create(double a, double b, double c, double s1, double s2,
                               double L, bldg_params** out) {
    if (auto rc = require(out != nullptr, "null output handle")) return rc;
    *out = nullptr;
    return guarded([&] { *out = new bldg_params{MaterialParams(a, b, c, s1, s2, L)}; });
}

void bldg_params_free(bldg_params* p) { delete p; }

double bldg_params_s0(const bldg_params* p) { return p ? p->value.s0 : 0.0; }

double bldg_params_linf_bound(const bldg_params* p) {
    return p ? p->value.linf_bound : 0.0;
}

bldg_status bldg_mesh_build(int surface_level, int radial_layers, bldg_mesh** out) {
    if (auto rc = require(out != nullptr, "null output handle")) return rc;
    *out = nullptr;
    return guarded([&] {
        *out = new bldg_mesh{build_ball_mesh(surface_level, radial_layers)};
    });
}

void bldg_mesh_free(bldg_mesh* m) { delete m; }

int bldg_mesh_vertex_count(const bldg_mesh* m) {
    return m ? m->value.vertex_count() : 0;
}

int bldg_mesh_tet_count(const bldg_mesh* m) { return m ? m->value.tet_count() : 0; }

int bldg_mesh_boundary_vertex_count(const bldg_mesh* m) {
    return m ? m->value.boundary_vertex_count() : 0;
}

double bldg_mesh_total_volume(const bldg_mesh* m) {
    return m ? m->value.total_volume() : 0.0;
}

double bldg_mesh_total_area(const bldg_mesh* m) {
    return m ? m->value.total_area() : 0.0;
}

bldg_status bldg_mesh_validate(const bldg_mesh* m) {
    if (auto rc = require(m != nullptr, "null mesh handle")) return rc;
    return guarded([&] {
        const auto failures = validate_mesh(m->value);
        if (!failures.empty()) throw NumericalError(failures.front());
    });
}

bldg_status bldg_mesh_write_vtk(const bldg_mesh* m, const char* path) {
    if (auto rc = require(m && path, "null argument")) return rc;
    return guarded([&] { write_mesh_vtk(m->value, path); });
}

bldg_status bldg_s2field_init_polar(const bldg_mesh* m, bldg_s2field** out) {
    if (auto rc = require(m && out, "null argument")) return rc;
    *out = nullptr;
    return guarded([&] {
        *out = new bldg_s2field{init_polar_tangent_field(m->value)};
    });
}

void bldg_s2field_free(bldg_s2field* u) { delete u; }

int bldg_s2field_size(const bldg_s2field* u) {
    return u ? static_cast<int>(u->value.size()) : 0;
}

bldg_status bldg_s2field_get(const bldg_s2field* u, int vertex, double out_xyz[3]) {
    if (auto rc = require(u && out_xyz, "null argument")) return rc;
    if (auto rc = require(vertex >= 0 && vertex < static_cast<int>(u->value.size()),
                          "vertex id out of range")) {
        return rc;
    }
    out_xyz[0] = u->value[vertex].x;
    out_xyz[1] = u->value[vertex].y;
    out_xyz[2] = u->value[vertex].z;
    return BLDG_OK;
}

bldg_status bldg_energy_harmonic(const bldg_mesh* m, const bldg_s2field* u,
                                 double* out) {
    if (auto rc = require(m && u && out, "null argument")) return rc;
    return guarded([&] { *out = energy_harmonic(u->value, m->value); });
}

bldg_status bldg_qfield_from_harmonic(const bldg_params* p, const bldg_s2field* u,
                                      bldg_qfield** out) {
    if (auto rc = require(p && u && out, "null argument")) return rc;
    *out = nullptr;
    return guarded([&] {
        *out = new bldg_qfield{init_from_harmonic(u->value, p->value)};
    });
}

void bldg_qfield_free(bldg_qfield* q) { delete q; }

double bldg_qfield_max_norm(const bldg_qfield* q) {
    return q ? max_q_norm(q->value) : 0.0;
}

bldg_status bldg_energy_ldg(const bldg_mesh* m, const bldg_params* p,
                            const bldg_qfield* q, bldg_energy_breakdown* out) {
    if (auto rc = require(m && p && q && out, "null argument")) return rc;
    return guarded([&] {
        const EnergyBreakdown e = energy_ldg(q->value, m->value, p->value);
        out->elastic = e.elastic;
        out->bulk_penalty = e.bulk_penalty;
        out->surface_penalty = e.surface_penalty;
        out->total = e.total;
    });
}

void bldg_solve_options_default(bldg_solve_options* opts) {
    if (!opts) return;
    const SolveConfig cfg;
    opts->max_iters = cfg.max_iters;
    opts->grad_tol = cfg.grad_tol;
    opts->step_init = cfg.step_init;
    opts->bb_min = cfg.bb_min;
    opts->bb_max = cfg.bb_max;
    opts->armijo_c = cfg.armijo_c;
    opts->proj_delta = cfg.proj_delta;
    opts->seed = cfg.seed;
}

bldg_status bldg_minimize_harmonic(const bldg_mesh* m,
                                   const bldg_solve_options* opts, bldg_s2field* u,
                                   bldg_trace** out_trace) {
    if (auto rc = require(m && u, "null argument")) return rc;
    if (out_trace) *out_trace = nullptr;
    return guarded([&] {
        auto [field, trace] = minimize_harmonic(u->value, m->value,
                                                to_solve_config(opts));
        u->value = std::move(field);
        if (out_trace) *out_trace = new bldg_trace{std::move(trace)};
    });
}

bldg_status bldg_minimize_ldg(const bldg_mesh* m, const bldg_params* p,
                              const bldg_solve_options* opts, bldg_qfield* q,
                              bldg_trace** out_trace) {
    if (auto rc = require(m && p && q, "null argument")) return rc;
    if (out_trace) *out_trace = nullptr;
    return guarded([&] {
        auto [field, trace] = minimize_ldg(q->value, m->value, p->value,
                                           to_solve_config(opts));
        q->value = std::move(field);
        if (out_trace) *out_trace = new bldg_trace{std::move(trace)};
    });
}

void bldg_trace_free(bldg_trace* t) { delete t; }

int bldg_trace_row_count(const bldg_trace* t) {
    return t ? static_cast<int>(t->value.rows.size()) : 0;
}

bldg_status bldg_trace_row(const bldg_trace* t, int i, int* iter, double* energy,
                           double* grad_norm, double* step) {
    if (auto rc = require(t != nullptr, "null trace handle")) return rc;
    if (auto rc = require(i >= 0 && i < static_cast<int>(t->value.rows.size()),
                          "trace row out of range")) {
        return rc;
    }
    const TraceRow& row = t->value.rows[i];
    if (iter) *iter = row.iter;
    if (energy) *energy = row.energy;
    if (grad_norm) *grad_norm = row.grad_norm;
    if (step) *step = row.step;
    return BLDG_OK;
}

int bldg_trace_converged(const bldg_trace* t) {
    return t && t->value.status == SolveStatus::converged ? 1 : 0;
}

int bldg_trace_repaired_count(const bldg_trace* t) {
    return t ? t->value.repaired_count : 0;
}

bldg_status bldg_trace_write_csv(const bldg_trace* t, const char* path) {
    if (auto rc = require(t && path, "null argument")) return rc;
    return guarded([&] { write_trace_csv(t->value, path); });
}

bldg_status bldg_analyze(const bldg_mesh* m, const bldg_s2field* u,
                         double fit_radius, bldg_report** out) {
    if (auto rc = require(m && u && out, "null argument")) return rc;
    *out = nullptr;
    return guarded([&] {
        *out = new bldg_report{parity_and_report(u->value, m->value, fit_radius)};
    });
}

void bldg_report_free(bldg_report* r) { delete r; }

int bldg_report_n_interior(const bldg_report* r) { return r ? r->value.n_int : 0; }

int bldg_report_n_boundary(const bldg_report* r) { return r ? r->value.n_bdy : 0; }

int bldg_report_index_sum(const bldg_report* r) { return r ? r->value.index_sum : 0; }

int bldg_report_index_consistent(const bldg_report* r) {
    return r && r->value.index_consistent ? 1 : 0;
}

bldg_status bldg_report_boundary_defect(const bldg_report* r, int i, int* vertex,
                                        int* index, int* tangent_sign,
                                        double* fit_error) {
    if (auto rc = require(r != nullptr, "null report handle")) return rc;
    if (auto rc = require(i >= 0 && i < static_cast<int>(r->value.boundary.size()),
                          "boundary defect index out of range")) {
        return rc;
    }
    const BoundaryDefect& d = r->value.boundary[i];
    if (vertex) *vertex = d.vertex;
    if (index) *index = d.index;
    if (tangent_sign) *tangent_sign = d.tangent_sign;
    if (fit_error) *fit_error = d.fit_error;
    return BLDG_OK;
}

bldg_status bldg_report_write_json(const bldg_report* r, const char* path) {
    if (auto rc = require(r && path, "null argument")) return rc;
    return guarded([&] {
        std::FILE* f = std::fopen(path, "w");
        if (!f) throw IoError(std::string("cannot open ") + path + " for writing");
        const std::string json = r->value.to_json();
        std::fwrite(json.data(), 1, json.size(), f);
        std::fclose(f);
    });
}

bldg_status bldg_config_load(const char* path, bldg_config** out) {
    if (auto rc = require(path && out, "null argument")) return rc;
    *out = nullptr;
    return guarded([&] { *out = new bldg_config{parse_config_file(path)}; });
}

bldg_status bldg_config_parse(const char* text, bldg_config** out) {
    if (auto rc = require(text && out, "null argument")) return rc;
    *out = nullptr;
    return guarded([&] { *out = new bldg_config{parse_config(text)}; });
}

void bldg_config_free(bldg_config* c) { delete c; }

bldg_status bldg_config_set_output_dir(bldg_config* c, const char* dir) {
    if (auto rc = require(c && dir, "null argument")) return rc;
    c->value.output_dir = dir;
    return BLDG_OK;
}

bldg_status bldg_config_set_seed(bldg_config* c, unsigned long long seed) {
    if (auto rc = require(c != nullptr, "null config handle")) return rc;
    c->value.seed = seed;
    c->value.solver.seed = seed;
    return BLDG_OK;
}

const char* bldg_config_output_dir(const bldg_config* c) {
    return c ? c->value.output_dir.c_str() : "";
}

bldg_status bldg_run_pipeline(const bldg_config* c, const char* stage,
                              char* failed_stage_buf, size_t buf_len) {
    if (auto rc = require(c && stage, "null argument")) return rc;
    const auto parsed = stage_from_name(stage);
    if (!parsed) {
        set_error(std::string("unknown stage '") + stage + "'");
        return BLDG_ERR_INVALID_ARGUMENT;
    }
    const PipelineResult result = run_pipeline(c->value, *parsed);
    if (result.ok) return BLDG_OK;
    set_error(result.failed_stage + ": " + result.message);
    if (failed_stage_buf && buf_len > 0) {
        std::strncpy(failed_stage_buf, result.failed_stage.c_str(), buf_len - 1);
        failed_stage_buf[buf_len - 1] = '\0';
    }
    return BLDG_ERR_NUMERICAL;
}

} // extern "C"
