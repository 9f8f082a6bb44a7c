#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qflow/energy.hpp"

// Verification harness: pointwise algebraic identities with negative-control
// mutations, the discrete integral cancellation, manufactured-solution
// convergence studies, and the regularization-limit study.

namespace qflow {

struct CheckReport {
    std::string name;
    int samples = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Deliberate defects, one per identity; the matching check must then fail.
enum class Mutation { none, corotation, cancellation, trace, gradient, sigma };

// Identity checks on random (grad u, Q, G) with symmetric Q, G:
//   corotation_contraction  S(grad u, Q) : G = grad u : (G Q - Q G)   (1e-12)
//   pointwise_cancellation  S(grad u, Qt) : R + sigma(Qt, R) : grad u = 0
//   corotation_structure    tr S = 0 and S = S^T                     (1e-12)
//   gradient_identity       L + (b/d) tr(Q^2) I + grad_fB = 0        (1e-12)
//   gradient_fd             FD of f_B along basis directions          (1e-6)
//   sigma_skew              sigma + sigma^T = 0                      (1e-12)
std::vector<CheckReport> identity_suite(std::uint64_t seed, int samples, int d,
                                        Mutation mut = Mutation::none);

struct CancellationReport {
    CheckReport periodic;              // exact summation-by-parts pairing
    std::vector<int> dirichlet_grids;  // informational boundary-defect decay
    std::vector<double> dirichlet_gap;
    double dirichlet_slope = 0.0;
};
CancellationReport discrete_cancellation(std::uint64_t seed, int n);

struct MmsReport {
    std::string problem;
    std::vector<int> grids;     // spatial study: cells per side; temporal: step counts
    std::vector<double> errors;
    double order = 0.0;
    double order_lo = 0.0, order_hi = 0.0;
    bool pass = false;
};

// problem in {heat, stokes, coupled_linear}; second-order spatial target.
MmsReport mms_convergence(const std::string& problem, const std::vector<int>& grids);
// backward-Euler order on a fixed grid via successive dt halving.
MmsReport mms_temporal();

struct EpsilonReport {
    std::vector<double> eps;   // descending, excluding 0
    std::vector<double> dist;  // || Q_eps(T) - Q_0(T) ||_L2
    bool strictly_decreasing = false;
};
EpsilonReport epsilon_limit_study();

// random band-limited fields for property tests
QField random_smooth_q(const GridSpec& g, int d, std::uint64_t seed, double amp = 1.0);
VecField random_smooth_vec(const GridSpec& g, std::uint64_t seed, double amp = 1.0);
VelocityField random_mac_velocity(const GridSpec& g, std::uint64_t seed, double amp = 1.0);

// uniaxial droplet with a smooth compactly supported envelope
QField uniaxial_bubble(const GridSpec& g, int d, double s, double cx, double cy, double radius,
                       const std::array<double, 3>& director);

struct SuiteSummary {
    std::string name;
    bool pass = false;
    double max_err = 0.0;
};

void write_check_csv(const std::string& path, const std::vector<CheckReport>& checks);
void write_summary_csv(const std::string& path, const std::vector<SuiteSummary>& rows);

}  // namespace qflow
