#include "config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace boojum {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(line, "expected a number, got '" + v + "'");
    return x;
}

long parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') fail(line, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t parse_uint(const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos) {
        fail(line, "expected an unsigned integer, got '" + v + "'");
    }
    return x;
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty entry in list '" + v + "'");
        out.push_back(parse_double(item, line));
    }
    if (out.empty()) fail(line, "expected a comma-separated list, got '" + v + "'");
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (surface_level < 0 || surface_level > 5) {
        throw InvalidParameter("mesh.surface_level must be in [0,5]");
    }
    if (radial_layers < 1 || radial_layers > 64) {
        throw InvalidParameter("mesh.radial_layers must be in [1,64]");
    }
    if (L_schedule.empty()) {
        throw InvalidParameter("sweep.L_schedule must be non-empty");
    }
    for (size_t i = 0; i < L_schedule.size(); ++i) {
        if (!(L_schedule[i] > 0.0)) {
            throw InvalidParameter("sweep.L_schedule entries must be positive");
        }
        if (i > 0 && !(L_schedule[i] < L_schedule[i - 1])) {
            throw InvalidParameter("sweep.L_schedule must be strictly decreasing");
        }
    }
    params_at(L_schedule.front()); // throws naming the violated invariant
    solver.validate();
    if (output_dir.empty()) throw InvalidParameter("output.dir must be non-empty");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) fail(line, "missing key");
        if (value.empty()) fail(line, "missing value for '" + key + "'");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

        if (key == "mesh.surface_level") {
            cfg.surface_level = static_cast<int>(parse_int(value, line));
        } else if (key == "mesh.radial_layers") {
            cfg.radial_layers = static_cast<int>(parse_int(value, line));
        } else if (key == "params.a") {
            cfg.a = parse_double(value, line);
        } else if (key == "params.b") {
            cfg.b = parse_double(value, line);
        } else if (key == "params.c") {
            cfg.c = parse_double(value, line);
        } else if (key == "params.s1") {
            cfg.s1 = parse_double(value, line);
        } else if (key == "params.s2") {
            cfg.s2 = parse_double(value, line);
        } else if (key == "sweep.L_schedule") {
            cfg.L_schedule = parse_list(value, line);
        } else if (key == "solver.max_iters") {
            cfg.solver.max_iters = static_cast<int>(parse_int(value, line));
        } else if (key == "solver.grad_tol") {
            cfg.solver.grad_tol = parse_double(value, line);
        } else if (key == "solver.step_init") {
            cfg.solver.step_init = parse_double(value, line);
        } else if (key == "solver.bb_min") {
            cfg.solver.bb_min = parse_double(value, line);
        } else if (key == "solver.bb_max") {
            cfg.solver.bb_max = parse_double(value, line);
        } else if (key == "solver.armijo_c") {
            cfg.solver.armijo_c = parse_double(value, line);
        } else if (key == "solver.proj_delta") {
            cfg.solver.proj_delta = parse_double(value, line);
        } else if (key == "output.dir") {
            cfg.output_dir = value;
        } else if (key == "seed") {
            cfg.seed = parse_uint(value, line);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    cfg.solver.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace boojum
