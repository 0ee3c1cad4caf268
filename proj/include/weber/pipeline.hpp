#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "weber/config.hpp"
#include "weber/dynamics.hpp"
#include "weber/field_table.hpp"

namespace weber {

// Calibrated beam plus the field source the integrator reads.
struct PreparedBeam {
    BeamSpec spec;  // amplitude_scale filled in
    std::unique_ptr<FieldTable> table;
    std::unique_ptr<DirectField> direct;
    double u_m = 0.0;

    const ScalarField& field() const;
};

// Builds the table (if sim.use_grid) over every region the run touches,
// then calibrates against it.
PreparedBeam prepare_beam(const RunConfig& config);

DynamicsContext make_context(const RunConfig& config, const PreparedBeam& beam);

void write_field_map(std::ostream& out, const RunConfig& config, const PreparedBeam& beam);

std::vector<std::pair<double, double>> um_curve(const RunConfig& config);

struct SimulationOutput {
    std::vector<AtomState> cloud;
    ArrivalMap map;
    EnsembleResult ensemble;
};

SimulationOutput simulate(const RunConfig& config, const PreparedBeam& beam);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Oracle and invariant checks for one config; cheap enough to run per job.
std::vector<CheckResult> validate_run(const RunConfig& config);

}  // namespace weber
