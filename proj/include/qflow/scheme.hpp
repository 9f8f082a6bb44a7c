#pragma once
#include <functional>

#include "qflow/solve.hpp"

// Backward-Euler step of the coupled flow / Q-tensor system, solved as a
// Banach fixed point: freeze Q_tilde = Q^n, solve the linear frozen-coefficient
// system repeatedly with the remainder re-evaluated at the latest iterate.

namespace qflow {

struct State {
    double t = 0.0;
    VelocityField u;
    QField Q;
};

enum class SchemeMode { standard, regularized };

struct SchemeConfig {
    double dt = 1e-3;
    double eps = 0.0;  // biharmonic regularization strength
    SchemeMode mode = SchemeMode::standard;
    double picard_tol = 1e-10;
    int picard_max = 50;
    MaterialParams mat;
    ViscositySpec visc;
    SolverConfig inner;  // inner CG; tighter than picard_tol by default

    SchemeConfig() { inner.tol = 1e-12; }
    double eps_effective() const { return mode == SchemeMode::regularized ? eps : 0.0; }
    void validate() const;
};

struct PicardReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  // successive-iterate distances
    double rho = 0.0;               // geometric-mean contraction factor
};

class StepRejected : public std::runtime_error {
  public:
    double residual;
    int iterations;
    StepRejected(double res, int it)
        : std::runtime_error("picard iteration did not converge, reduce dt"),
          residual(res), iterations(it) {}
};

class RunFailure : public std::runtime_error {
  public:
    explicit RunFailure(const std::string& m) : std::runtime_error(m) {}
};

struct NonlinearRhs {
    VelocityField F;  // projected force remainder
    QField G;         // Q-equation remainder
};

// F = P div[(nu(Q) - nu(Qt)) D(u) + tau(Q) + sigma(Q - Qt, Q) - u x u]
// G = -(u . grad) Q + S(grad u, Q - Qt) + Gamma L(Q)
NonlinearRhs nonlinear_rhs(const VelocityField& u, const QField& Q, const QField& Qt,
                           const SchemeConfig& cfg);

// One backward-Euler solve of the frozen-coefficient system:
//   (u+ - u^n)/dt = P div[nu(Qt) D(u+) + sigma(Qt, Q_couple)] + F
//   (Q+ - Q^n)/dt + eps lap^2 Q+ - Gamma lambda lap Q+ = S(grad u+, Qt) + G
// The sigma coupling uses the previous iterate's Q (lagged inside the sweep).
State linearized_solve(const State& base, const QField& Qt, const VelocityField& F,
                       const QField& G, const QField& Q_couple, const SchemeConfig& cfg);

struct PicardResult {
    State state;
    PicardReport report;
};

// Throws StepRejected when picard_max sweeps do not reach picard_tol.
PicardResult picard_step(const State& base, const SchemeConfig& cfg);

// Distance moved by one extra Picard sweep applied to the converged state;
// bounded by ~10 picard_tol at a genuine fixed point.
double fixed_point_residual(const State& base, const State& converged, const SchemeConfig& cfg);

// u in L2, Q in L2 + grad + lap (discrete H1 x H2 proxy)
double state_norm_h1h2(const VelocityField& du, const QField& dQ);

struct BoundaryLapQ {
    double closure_trace;       // wall value under the scheme's own closure
    double extrapolated_trace;  // one-sided quadratic extrapolation to the wall
};
BoundaryLapQ boundary_lapq(const QField& Q);

// Fixed-dt outer loop with step rejection: on StepRejected the step is retried
// at dt/2, at most 5 halvings, then RunFailure. The callback sees every
// accepted step.
using StepCallback = std::function<void(const State&, const PicardReport&, double)>;
void advance(State& s, double t_end, const SchemeConfig& cfg, const StepCallback& cb = {});

}  // namespace qflow
