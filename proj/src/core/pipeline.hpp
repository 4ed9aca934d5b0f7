#pragma once

#include "analysis.hpp"
#include "config.hpp"

#include <optional>
#include <string>

namespace boojum {

enum class Stage { mesh, harmonic, sweep, analyze, all };

std::optional<Stage> stage_from_name(const std::string& name);
const char* stage_name(Stage stage);

struct PipelineResult {
    bool ok = true;
    std::string failed_stage;
    std::string message;
};

// Executes one stage (or the whole chain) into cfg.output_dir. Artifacts:
//   mesh.vtk, u_harmonic.vtk, u_harmonic.dat, trace.csv, q_field_L*.vtk,
//   energies.csv, defects.json, monotonicity.csv.
// Failures are also recorded in failure.json naming the stage.
PipelineResult run_pipeline(const RunConfig& cfg, Stage stage);

// CSV emitters with fixed layouts (documented in the README).
void write_trace_csv(const SolveTrace& trace, const std::string& path);
void write_energies_csv(const std::vector<SweepRow>& rows, const std::string& path);
void write_monotonicity_csv(const std::vector<MonotonicityProfile>& profiles,
                            const std::string& path);

void save_s2field(const S2Field& u, const std::string& path);
std::optional<S2Field> load_s2field(const std::string& path, int expected_count);

} // namespace boojum
