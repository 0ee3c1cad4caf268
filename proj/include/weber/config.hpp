#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "weber/beam.hpp"
#include "weber/dynamics.hpp"
#include "weber/force.hpp"
#include "weber/units.hpp"

namespace weber {

struct SimConfig {
    double t_max = 2.1e5;  // 1/Gamma
    double tol = 1e-8;
    double x_exit = -150.0;
    bool use_grid = true;
    double grid_step = 0.01;  // table spacing in the parabolic coordinate
    ForceDenominator force_denominator = ForceDenominator::as_printed;
    DipoleBranch dipole_branch = DipoleBranch::plus;
    // Optical force only for x_window_min <= x <= x_window_max.
    double x_window_min = -std::numeric_limits<double>::infinity();
    double x_window_max = std::numeric_limits<double>::infinity();
    Window calibration{};
    int calibration_grid = 512;
    int threads = 1;
    double direct_check_fraction = 0.01;  // validate: share of atoms rerun without the table
};

struct OutputConfig {
    std::string directory = "out";
    double cadence = 500.0;  // 1/Gamma
    bool trajectories = true;
    bool summary = true;
};

struct FieldMapConfig {
    Window window{};
    int nx = 401;
    int ny = 401;
};

struct UmCurveConfig {
    double a_min = -10.0;
    double a_max = 10.0;
    double a_step = 0.5;
};

struct RunConfig {
    PhysicalSetup setup;
    BeamSpec beam;
    CloudConfig cloud;
    SimConfig sim;
    ClassifyParams classify;
    OutputConfig output;
    FieldMapConfig field_map;
    UmCurveConfig um_curve;

    // Throws ConfigError (line 0) on a constraint violation.
    void validate() const;
    SimParams sim_params() const;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, int column, const std::string& what);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// Sectioned key-value text. Either "[beam]" headers followed by "key = value"
// or dotted "beam.key = value" lines; '#' starts a comment. Unknown keys,
// malformed values and constraint violations throw ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Apply one "section.key=value" override on top of an existing config.
void apply_override(RunConfig& config, std::string_view assignment);

// Canonical text form; parse_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const RunConfig& config);

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);
std::string format_complex(cplx z);
cplx parse_complex(std::string_view text);

}  // namespace weber
