#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "qflow/ops.hpp"

// Conjugate-gradient building blocks: pressure Poisson, Helmholtz projection,
// implicit variable-viscosity momentum solve, implicit Q-solve.

namespace qflow {

struct SolverConfig {
    double tol = 1e-10;   // relative residual
    int max_iter = 0;     // 0 -> 10 (nx + ny)
    enum class Pc { none, jacobi } pc = Pc::none;
    int effective_max_iter(const GridSpec& g) const {
        return max_iter > 0 ? max_iter : 10 * (g.nx + g.ny);
    }
};

struct SolveStats {
    int iterations = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
};

class SolverError : public std::runtime_error {
  public:
    double residual;
    int iterations;
    SolverError(const std::string& msg, double res, int it)
        : std::runtime_error(msg), residual(res), iterations(it) {}
};

// -lap q = rhs with the given ghost closure. copy/wrap closures are singular
// (constants): the rhs must have zero mean and the returned solution is
// zero-mean. odd closure is the nonsingular homogeneous-Dirichlet solve.
ScalarField solve_poisson(const ScalarField& rhs, const SolverConfig& cfg, Closure cl,
                          SolveStats* stats = nullptr);

struct ProjectionResult {
    VelocityField vel;  // divergence-free part
    ScalarField q;      // potential, v = P v + grad q
    SolveStats stats;
};

// Leray projection for fields with vanishing normal boundary flux.
ProjectionResult helmholtz_project(const VelocityField& v, const SolverConfig& cfg);

// (I + dt A) with A u = -div(nu(Q) D(u)), assembled as the exact adjoint of the
// discrete strain so that <A u, v> equals the viscous dissipation form.
struct ViscousOp {
    GridSpec g;
    double dt = 0.0;
    std::vector<double> nu_cell;  // nx * ny
    std::vector<double> nu_node;  // (nx+1) * (ny+1)

    ViscousOp(const QField& Q_tilde, const ViscositySpec& visc, double dt);
    void apply(const std::vector<double>& in_u, const std::vector<double>& in_v,
               std::vector<double>& out_u, std::vector<double>& out_v) const;
    // dissipation form: sum nu (D11^2 + D22^2 + 2 D12^2) * cell area
    double dissipation(const VelocityField& u) const;
    std::vector<double> jacobi_diag() const;  // concatenated [u; v]
};

struct MomentumResult {
    VelocityField vel;
    ScalarField q;
    SolveStats visc, proj;
};

// CG solve of (I + dt A) u = u_old + dt * forces, then Helmholtz projection.
MomentumResult momentum_solve(const VelocityField& u_old, const VelocityField& forces,
                              const QField& Q_tilde, const ViscositySpec& visc, double dt,
                              const SolverConfig& cfg);

// Per-component CG solve of (I + dt (eps lap^2 - gl lap)) Q = rhs with odd
// closures (gl = Gamma * lambda). The eps term composes two Laplacians with the
// intermediate field closed at zero on the walls.
QField solve_q_implicit(const QField& rhs, double dt, double eps, double gl,
                        const SolverConfig& cfg, SolveStats* stats = nullptr);

}  // namespace qflow
