#pragma once

#include "qtensor.hpp"
#include "solve.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace boojum {

// Whole-run configuration parsed from the line-oriented `section.key = value`
// format. Every key has a documented default; unknown or duplicate keys are
// rejected with the offending line number.
struct RunConfig {
    int surface_level = 3;
    int radial_layers = 12;
    double a = -0.5;
    double b = 1.0;
    double c = 1.0;
    double s1 = 3.0;
    double s2 = 3.0;
    std::vector<double> L_schedule = {0.5, 0.25, 0.125, 0.0625};
    SolveConfig solver;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    MaterialParams params_at(double L) const {
        return MaterialParams(a, b, c, s1, s2, L);
    }

    // Re-checks every cross-field invariant; throws InvalidParameter.
    void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace boojum
