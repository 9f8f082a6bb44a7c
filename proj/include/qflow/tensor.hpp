#pragma once
#include <array>
#include <cstddef>
#include <string>

// Pointwise tensor algebra for the Q-tensor model: minimal-basis storage,
// bulk potential, molecular field, coupling stresses, viscosity law.

namespace qflow {

// Dense d x d matrix, d in {2,3}. Row-major, unused entries stay zero.
struct Mat {
    int d = 2;
    std::array<double, 9> a{};

    explicit Mat(int dim = 2) : d(dim) {}
    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
};

Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(const Mat& A, const Mat& B);
Mat operator*(double s, const Mat& A);
Mat transpose(const Mat& A);
Mat identity(int d);
double trace(const Mat& A);
double frob_dot(const Mat& A, const Mat& B);  // A : B
double frob_norm(const Mat& A);
Mat commutator(const Mat& A, const Mat& B);   // AB - BA

// Embed a 2x2 spatial matrix into d x d (zero third row/column when d = 3).
Mat promote(const Mat& A2, int d);

// Symmetric traceless tensor in minimal coordinates.
// d = 2: (Qxx, Qxy); d = 3: (Qxx, Qxy, Qxz, Qyy, Qyz), Qzz = -(Qxx + Qyy).
struct QTensor {
    int d = 2;
    std::array<double, 5> q{};

    explicit QTensor(int dim = 2) : d(dim) {}
};

int ncoef(int d);                  // 2 or 5
Mat to_matrix(const QTensor& Q);   // trace is exactly zero by construction
QTensor from_matrix(const Mat& M); // symmetrize and remove trace, then extract
double trQ2(const QTensor& Q);     // |Q|^2 in closed form

struct MaterialParams {
    double a = -0.3;
    double b = 0.0;
    double c = 1.0;
    double lambda = 1.0;  // elastic constant, > 0
    double gamma = 1.0;   // rotational mobility, > 0
    void validate() const;  // throws std::invalid_argument
};

enum class ViscosityFamily { constant, rational };

struct ViscositySpec {
    ViscosityFamily family = ViscosityFamily::constant;
    double nu0 = 1.0;
    double nu1 = 0.0;
    void validate() const;  // bounds 0 < c0 <= nu <= c1 require nu0 > 0, nu1 >= 0
};

// s (n x n - I/d) for a unit director n (first d entries used).
QTensor uniaxial(double s, const std::array<double, 3>& n, int d);

Mat stretch_D(const Mat& grad_u);    // (A + A^T)/2
Mat vorticity_W(const Mat& grad_u);  // (A - A^T)/2

// S(grad u, Q) = W Q - Q W, symmetric traceless for symmetric Q.
Mat corotation_S(const Mat& grad_u, const QTensor& Q);

// sigma(Q1, lap Q2) = Q1 lap Q2 - (lap Q2) Q1, skew for symmetric arguments.
Mat sigma_stress(const QTensor& Q1, const Mat& lapQ2);

// f_B = (a/2) tr Q^2 - (b/3) tr Q^3 + (c/4) (tr Q^2)^2
double bulk_energy_fB(const QTensor& Q, const MaterialParams& p);

// Unconstrained matrix gradient of f_B: a Q - b Q^2 + c tr(Q^2) Q.
// Callers project onto the traceless subspace where needed.
Mat grad_fB(const QTensor& Q, const MaterialParams& p);

// L(Q) = -a Q + b (Q^2 - tr(Q^2)/d I) - c tr(Q^2) Q; satisfies
// L + (b/d) tr(Q^2) I = -grad_fB exactly.
Mat lower_order_L(const QTensor& Q, const MaterialParams& p);

// H(Q) = lambda lap Q + L(Q)
Mat molecular_H(const QTensor& Q, const QTensor& lapQ, const MaterialParams& p);

// constant: nu0; rational: nu0 + nu1 tr(Q^2) / (1 + tr(Q^2))
double viscosity_nu(const QTensor& Q, const ViscositySpec& v);

// min over S0 of f_B (radial envelope, <= 0); the bulk integral obeys
// F >= -C |Omega| with C = -bulk_min_fB.
double bulk_min_fB(const MaterialParams& p, int d);

}  // namespace qflow
