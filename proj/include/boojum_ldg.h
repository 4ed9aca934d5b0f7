/* C interface to the boojum-ldg shared library.
 *
 * All functions returning bldg_status report BLDG_OK on success; on failure
 * bldg_last_error() holds a human-readable message for the calling thread.
 * Handles are opaque and freed with the matching *_free function.
 */
#ifndef BOOJUM_LDG_H
#define BOOJUM_LDG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bldg_status {
    BLDG_OK = 0,
    BLDG_ERR_INVALID_ARGUMENT = 1,
    BLDG_ERR_PARSE = 2,
    BLDG_ERR_IO = 3,
    BLDG_ERR_NUMERICAL = 4,
    BLDG_ERR_DEGENERATE_PROJECTION = 5,
    BLDG_ERR_INTERNAL = 6
} bldg_status;

const char* bldg_version(void);
const char* bldg_last_error(void);

typedef struct bldg_params bldg_params;
typedef struct bldg_mesh bldg_mesh;
typedef struct bldg_s2field bldg_s2field;
typedef struct bldg_qfield bldg_qfield;
typedef struct bldg_trace bldg_trace;
typedef struct bldg_report bldg_report;
typedef struct bldg_config bldg_config;

/* Material parameters (a, b, c, s1, s2, L); rejects b^2 <= 27ac. */
bldg_status bldg_params_create(double a, double b, double c, double s1,
                               double s2, double L, bldg_params** out);
void bldg_params_free(bldg_params* p);
double bldg_params_s0(const bldg_params* p);
double bldg_params_linf_bound(const bldg_params* p);

/* Unit-ball tetrahedral mesh. */
bldg_status bldg_mesh_build(int surface_level, int radial_layers, bldg_mesh** out);
void bldg_mesh_free(bldg_mesh* m);
int bldg_mesh_vertex_count(const bldg_mesh* m);
int bldg_mesh_tet_count(const bldg_mesh* m);
int bldg_mesh_boundary_vertex_count(const bldg_mesh* m);
double bldg_mesh_total_volume(const bldg_mesh* m);
double bldg_mesh_total_area(const bldg_mesh* m);
bldg_status bldg_mesh_validate(const bldg_mesh* m);
bldg_status bldg_mesh_write_vtk(const bldg_mesh* m, const char* path);

/* Unit vector fields with tangential boundary values. */
bldg_status bldg_s2field_init_polar(const bldg_mesh* m, bldg_s2field** out);
void bldg_s2field_free(bldg_s2field* u);
int bldg_s2field_size(const bldg_s2field* u);
bldg_status bldg_s2field_get(const bldg_s2field* u, int vertex, double out_xyz[3]);
bldg_status bldg_energy_harmonic(const bldg_mesh* m, const bldg_s2field* u,
                                 double* out);

/* Q-tensor fields. */
bldg_status bldg_qfield_from_harmonic(const bldg_params* p, const bldg_s2field* u,
                                      bldg_qfield** out);
void bldg_qfield_free(bldg_qfield* q);
double bldg_qfield_max_norm(const bldg_qfield* q);

typedef struct bldg_energy_breakdown {
    double elastic;
    double bulk_penalty;
    double surface_penalty;
    double total;
} bldg_energy_breakdown;

bldg_status bldg_energy_ldg(const bldg_mesh* m, const bldg_params* p,
                            const bldg_qfield* q, bldg_energy_breakdown* out);

/* Solver options mirroring the library defaults. */
typedef struct bldg_solve_options {
    int max_iters;
    double grad_tol;
    double step_init;
    double bb_min;
    double bb_max;
    double armijo_c;
    double proj_delta;
    unsigned long long seed;
} bldg_solve_options;

void bldg_solve_options_default(bldg_solve_options* opts);

/* Minimizes in place; the optional trace must be freed by the caller. */
bldg_status bldg_minimize_harmonic(const bldg_mesh* m,
                                   const bldg_solve_options* opts,
                                   bldg_s2field* u, bldg_trace** out_trace);
bldg_status bldg_minimize_ldg(const bldg_mesh* m, const bldg_params* p,
                              const bldg_solve_options* opts, bldg_qfield* q,
                              bldg_trace** out_trace);

void bldg_trace_free(bldg_trace* t);
int bldg_trace_row_count(const bldg_trace* t);
bldg_status bldg_trace_row(const bldg_trace* t, int i, int* iter, double* energy,
                           double* grad_norm, double* step);
int bldg_trace_converged(const bldg_trace* t);
int bldg_trace_repaired_count(const bldg_trace* t);
bldg_status bldg_trace_write_csv(const bldg_trace* t, const char* path);

/* Defect detection, tangent-map fits and the JSON report. */
bldg_status bldg_analyze(const bldg_mesh* m, const bldg_s2field* u,
                         double fit_radius, bldg_report** out);
void bldg_report_free(bldg_report* r);
int bldg_report_n_interior(const bldg_report* r);
int bldg_report_n_boundary(const bldg_report* r);
int bldg_report_index_sum(const bldg_report* r);
int bldg_report_index_consistent(const bldg_report* r);
bldg_status bldg_report_boundary_defect(const bldg_report* r, int i, int* vertex,
                                        int* index, int* tangent_sign,
                                        double* fit_error);
bldg_status bldg_report_write_json(const bldg_report* r, const char* path);

/* Run configuration and the staged pipeline. */
bldg_status bldg_config_load(const char* path, bldg_config** out);
bldg_status bldg_config_parse(const char* text, bldg_config** out);
void bldg_config_free(bldg_config* c);
bldg_status bldg_config_set_output_dir(bldg_config* c, const char* dir);
bldg_status bldg_config_set_seed(bldg_config* c, unsigned long long seed);
const char* bldg_config_output_dir(const bldg_config* c);

/* stage is one of "mesh", "harmonic", "sweep", "analyze", "all". On failure
 * the failing stage name is copied into failed_stage_buf when provided. */
bldg_status bldg_run_pipeline(const bldg_config* c, const char* stage,
                              char* failed_stage_buf, size_t buf_len);

#ifdef __cplusplus
}
#endif

#endif /* BOOJUM_LDG_H */
