#include "qflow/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace qflow {

Mat operator+(const Mat& A, const Mat& B) {
    Mat C(A.d);
    for (int k = 0; k < 9; ++k) C.a[k] = A.a[k] + B.a[k];
    return C;
}

Mat operator-(const Mat& A, const Mat& B) {
    Mat C(A.d);
    for (int k = 0; k < 9; ++k) C.a[k] = A.a[k] - B.a[k];
    return C;
}

Mat operator*(const Mat& A, const Mat& B) {
    Mat C(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j) {
            double s = 0.0;
            for (int k = 0; k < A.d; ++k) s += A(i, k) * B(k, j);
            C(i, j) = s;
        }
    return C;
}

Mat operator*(double s, const Mat& A) {
    Mat C(A.d);
    for (int k = 0; k < 9; ++k) C.a[k] = s * A.a[k];
    return C;
}

Mat transpose(const Mat& A) {
    Mat C(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j) C(i, j) = A(j, i);
    return C;
}

Mat identity(int d) {
    Mat I(d);
    for (int i = 0; i < d; ++i) I(i, i) = 1.0;
    return I;
}

double trace(const Mat& A) {
    double t = 0.0;
    for (int i = 0; i < A.d; ++i) t += A(i, i);
    return t;
}

double frob_dot(const Mat& A, const Mat& B) {
    double s = 0.0;
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j) s += A(i, j) * B(i, j);
    return s;
}

double frob_norm(const Mat& A) { return std::sqrt(frob_dot(A, A)); }

Mat commutator(const Mat& A, const Mat& B) { return A * B - B * A; }

Mat promote(const Mat& A2, int d) {
    Mat C(d);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) C(i, j) = A2(i, j);
    return C;
}

int ncoef(int d) {
    if (d == 2) return 2;
    if (d == 3) return 5;
    throw std::invalid_argument("tensor dimension must be 2 or 3");
}

Mat to_matrix(const QTensor& Q) {
    Mat M(Q.d);
    if (Q.d == 2) {
        M(0, 0) = Q.q[0];
        M(0, 1) = M(1, 0) = Q.q[1];
        M(1, 1) = -Q.q[0];
    } else {
        M(0, 0) = Q.q[0];
        M(0, 1) = M(1, 0) = Q.q[1];
        M(0, 2) = M(2, 0) = Q.q[2];
        M(1, 1) = Q.q[3];
        M(1, 2) = M(2, 1) = Q.q[4];
        M(2, 2) = -(Q.q[0] + Q.q[3]);
    }
    return M;
}

QTensor from_matrix(const Mat& M) {
    QTensor Q(M.d);
    const double tr = trace(M) / M.d;
    if (M.d == 2) {
        Q.q[0] = 0.5 * (M(0, 0) - M(1, 1));
        Q.q[1] = 0.5 * (M(0, 1) + M(1, 0));
    } else {
        Q.q[0] = M(0, 0) - tr;
        Q.q[1] = 0.5 * (M(0, 1) + M(1, 0));
        Q.q[2] = 0.5 * (M(0, 2) + M(2, 0));
        Q.q[3] = M(1, 1) - tr;
        Q.q[4] = 0.5 * (M(1, 2) + M(2, 1));
    }
    return Q;
}

double trQ2(const QTensor& Q) {
    if (Q.d == 2) return 2.0 * (Q.q[0] * Q.q[0] + Q.q[1] * Q.q[1]);
    const double zz = Q.q[0] + Q.q[3];
    return Q.q[0] * Q.q[0] + Q.q[3] * Q.q[3] + zz * zz +
           2.0 * (Q.q[1] * Q.q[1] + Q.q[2] * Q.q[2] + Q.q[4] * Q.q[4]);
}

void MaterialParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw std::invalid_argument("material parameters a, b, c must be finite");
    if (c <= 0.0) throw std::invalid_argument("material parameter c must be > 0");
    if (lambda <= 0.0) throw std::invalid_argument("elastic constant lambda must be > 0");
    if (gamma <= 0.0) throw std::invalid_argument("mobility gamma must be > 0");
}

void ViscositySpec::validate() const {
    if (nu0 <= 0.0) throw std::invalid_argument("viscosity nu0 must be > 0");
    if (nu1 < 0.0) throw std::invalid_argument("viscosity nu1 must be >= 0");
}

QTensor uniaxial(double s, const std::array<double, 3>& n, int d) {
    ncoef(d);
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) norm2 += n[i] * n[i];
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw std::invalid_argument("uniaxial director must be a unit vector");
    Mat M(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = s * (n[i] * n[j] - (i == j ? 1.0 / d : 0.0));
    return from_matrix(M);
}

Mat stretch_D(const Mat& grad_u) { return 0.5 * (grad_u + transpose(grad_u)); }

Mat vorticity_W(const Mat& grad_u) { return 0.5 * (grad_u - transpose(grad_u)); }

Mat corotation_S(const Mat& grad_u, const QTensor& Q) {
    return commutator(vorticity_W(grad_u), to_matrix(Q));
}

Mat sigma_stress(const QTensor& Q1, const Mat& lapQ2) {
    return commutator(to_matrix(Q1), lapQ2);
}

double bulk_energy_fB(const QTensor& Q, const MaterialParams& p) {
    const Mat M = to_matrix(Q);
    const double x = trQ2(Q);
    const double t3 = trace(M * M * M);
    return 0.5 * p.a * x - p.b / 3.0 * t3 + 0.25 * p.c * x * x;
}

Mat grad_fB(const QTensor& Q, const MaterialParams& p) {
    const Mat M = to_matrix(Q);
    const double x = trQ2(Q);
    return (p.a + p.c * x) * M - p.b * (M * M);
}

Mat lower_order_L(const QTensor& Q, const MaterialParams& p) {
    const Mat M = to_matrix(Q);
    const double x = trQ2(Q);
    const Mat M2 = M * M;
    return (-p.a - p.c * x) * M + p.b * (M2 - (x / Q.d) * identity(Q.d));
}

Mat molecular_H(const QTensor& Q, const QTensor& lapQ, const MaterialParams& p) {
    return p.lambda * to_matrix(lapQ) + lower_order_L(Q, p);
}

double viscosity_nu(const QTensor& Q, const ViscositySpec& v) {
    if (v.family == ViscosityFamily::constant) return v.nu0;
    const double x = trQ2(Q);
    return v.nu0 + v.nu1 * x / (1.0 + x);
}

double bulk_min_fB(const MaterialParams& p, int d) {
    // Radial envelope over x = tr Q^2 >= 0. The cubic term is extremal on the
    // uniaxial ray where |tr Q^3| = x^(3/2)/sqrt(6) (d = 3) and vanishes for d = 2.
    const double k = (d == 3) ? std::abs(p.b) / (3.0 * std::sqrt(6.0)) : 0.0;
    auto g = [&](double x) { return 0.5 * p.a * x - k * std::pow(x, 1.5) + 0.25 * p.c * x * x; };
    // Coarse scan plus refinement; envelope grows like x^2, so the minimizer
    // sits below xmax = 4 (|a| + k + 1) / c + 1.
    const double xmax = 4.0 * (std::abs(p.a) + k + 1.0) / p.c + 1.0;
    double best_x = 0.0, best = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double x = xmax * i / n;
        const double v = g(x);
        if (v < best) { best = v; best_x = x; }
    }
    double lo = std::max(0.0, best_x - xmax / n), hi = best_x + xmax / n;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (g(m1) < g(m2)) hi = m2; else lo = m1;
    }
    return std::min(0.0, std::min(best, g(0.5 * (lo + hi))));
}

}  // namespace qflow
