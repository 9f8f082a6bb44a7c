#pragma once
#include <iosfwd>

#include "qflow/config.hpp"
#include "qflow/energy.hpp"

// Outer run loop: builds the initial state, advances to t_end recording the
// energy ledger, writes snapshots / CSV artifacts into the output directory.

namespace qflow {

struct RunResult {
    int steps = 0;
    double t_final = 0.0;
    EnergyLedger ledger;
    bool audited = false;  // energy audit applies to constant-viscosity runs
    AuditReport audit;
};

State build_initial_state(const RunConfig& rc);

// Throws ConfigError for bad inputs, RunFailure when a step cannot be taken.
RunResult run_simulation(const RunConfig& rc, std::ostream& log);

}  // namespace qflow
