#pragma once
#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qflow/scheme.hpp"

// Run configuration parsed from a small TOML subset: [section] headers,
// key = value lines, values are quoted strings, numbers, booleans, or flat
// numeric arrays, comments start with '#'. Unknown or mistyped keys are
// reported by name.

namespace qflow {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitialSpec {
    enum class Kind { zero, bubble, file } kind = Kind::zero;
    double s = 0.25;
    double cx = 0.5, cy = 0.5;
    double radius = 0.22;
    std::array<double, 3> director{1.0, 0.0, 0.0};
    std::string path;  // state snapshot for kind == file
};

struct RunConfig {
    GridSpec grid;
    int d = 2;
    SchemeConfig scheme;  // material, viscosity and solver settings ride inside
    double t_end = 0.1;
    InitialSpec initial;
    std::string out_dir = "out";
    int snapshot_every = 0;  // 0: only the final state
    int log_every = 1;
};

RunConfig parse_run_config(std::istream& in, const std::string& name);
RunConfig load_run_config(const std::string& path);

// write the fully resolved configuration back out (same TOML subset)
void echo_config(std::ostream& os, const RunConfig& rc);

}  // namespace qflow
