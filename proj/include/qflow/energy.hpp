#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "qflow/scheme.hpp"

// Energy bookkeeping: E = kinetic + free energy, dissipation functional B,
// trapezoid accumulation of the dissipation integral and the law's residual
//   E(t) + int_0^t B - E(0).

namespace qflow {

double kinetic_energy(const VelocityField& u);

// Elastic part accumulated on faces (the quadratic form of the scheme's
// Laplacian), bulk part by midpoint rule.
double free_energy(const QField& Q, const MaterialParams& p);

// Scheme-exact dissipation: sum nu(Q)|D(u)|^2 + Gamma ||H(Q)||^2. This is the
// quantity the backward-Euler step actually removes per unit time, and what
// the ledger's B column records.
double dissipation_exact(const VelocityField& u, const QField& Q, const MaterialParams& p,
                         const ViscositySpec& visc);

// Diagnostic form ||grad u||^2 + Gamma ||H(Q)||^2 (reported in the run log).
double dissipation_B(const VelocityField& u, const QField& Q, const MaterialParams& p);

struct EnergyRecord {
    double t = 0.0;
    double kinetic = 0.0;
    double free_en = 0.0;
    double total = 0.0;
    double B = 0.0;
    double cumB = 0.0;
    double residual = 0.0;
    // extra run diagnostics (not part of the CSV schema)
    double max_div = 0.0;
    double bdry_lapq = 0.0;
    int picard_iters = 0;
    double rho = 0.0;
};

struct EnergyLedger {
    std::vector<EnergyRecord> rows;

    double E0() const { return rows.empty() ? 0.0 : rows.front().total; }
    // computes energies at the state, extends the trapezoid integral
    void record(const State& s, const MaterialParams& p, const ViscositySpec& visc,
                int picard_iters = 0, double rho = 0.0);
    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
};

struct AuditReport {
    bool pass = false;
    double max_signed_residual = 0.0;  // law says residual <= 0 up to O(dt)
    double final_abs_residual = 0.0;
    double worst_step_increase = 0.0;  // max over steps of E^{n+1} - E^n
    bool monotone = false;
    double tol = 0.0;
};

// Constant-viscosity runs only: checks residual <= tol (1 + E(0)) and per-step
// near-monotonicity E^{n+1} <= E^n + tol * dt.
AuditReport dissipation_audit(const EnergyLedger& led, double tol_audit = 1e-3);

struct DiagnosticNorms {
    double u_l2 = 0.0, u_h1 = 0.0;
    double q_l2 = 0.0, q_h1 = 0.0, q_h2 = 0.0;
    double B = 0.0;
};
DiagnosticNorms diagnostic_norms(const State& s, const MaterialParams& p);

}  // namespace qflow
