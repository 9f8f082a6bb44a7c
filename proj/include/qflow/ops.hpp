#pragma once
#include <utility>

#include "qflow/grid.hpp"

// Finite-difference operators on the MAC grid. Cell-centered stencils close
// their single ghost layer by the field's boundary role:
//   odd  - value reflects with a sign flip, wall trace is zero (Q, lap Q)
//   copy - even reflection, zero normal derivative (pressure)
//   wrap - periodic
// Ghosts are synthesized on the fly; dirichlet0 fields never store them.

namespace qflow {

enum class Closure { odd, copy, wrap };

Closure default_closure(const GridSpec& g);  // odd for dirichlet0, wrap for periodic

// one-ghost-layer accessor for a cell-centered component
double cc_get(const std::vector<double>& a, const GridSpec& g, int i, int j,
              Closure cl, int stride = 1, int comp = 0);

// 5-point Laplacian per component
ScalarField laplacian_scalar(const ScalarField& f, Closure cl);
QField laplacian_q(const QField& Q);

// lap(lap Q): the intermediate field is closed with its own odd reflection,
// which realizes lap Q = 0 on the walls.
QField biharmonic_q(const QField& Q);

// centered first derivatives per component
std::pair<QField, QField> grad_q(const QField& Q);
VecField grad_scalar(const ScalarField& f, Closure cl);
std::pair<VecField, VecField> grad_vec(const VecField& w, Closure cl);  // columns d/dx, d/dy

// tau_ij = -lambda d_i Q : d_j Q (2x2 spatial stress)
MatField ericksen_tau(const QField& Q, double lambda);

// (u . grad) Q with u interpolated to cell centers, centered differences
QField convect_q(const VelocityField& vel, const QField& Q);

// Divergence-form MAC advection div(u x u) evaluated on faces.
VelocityField convect_u(const VelocityField& vel);

// cell-centered divergence of a 2x2 matrix field, (div F)_i = d_j F_ij
VecField div_matrix(const MatField& F, Closure cl);

// MAC divergence and gradient
ScalarField div_mac(const VelocityField& vel);
VelocityField grad_to_faces(const ScalarField& p, Closure cl);  // zero on walls

// stress divergence assembled on faces (node-averaged off-diagonal part)
VelocityField div_stress_faces(const MatField& F);

// grad u at cell centers (2x2), MAC interpolation
MatField gradu_center(const VelocityField& vel);
VecField velocity_at_centers(const VelocityField& vel);

// Frobenius product of two minimal-basis tensors
double qdot(const QTensor& A, const QTensor& B);

// grid-weighted inner products and norms
double dot_cc(const ScalarField& a, const ScalarField& b);
double dot_cc(const VecField& a, const VecField& b);
double dot_q(const QField& A, const QField& B);
double dot_mat(const MatField& A, const MatField& B);
double dot_mac(const VelocityField& a, const VelocityField& b);
double norm_cc(const ScalarField& a);
double norm_q(const QField& A);
double norm_mac(const VelocityField& a);
double max_abs_div(const VelocityField& vel);

}  // namespace qflow
