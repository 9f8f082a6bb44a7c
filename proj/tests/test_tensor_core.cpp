#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "qflow/tensor.hpp"

using namespace qflow;

namespace {

QTensor rand_q(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    QTensor Q(d);
    for (int c = 0; c < ncoef(d); ++c) Q.q[c] = U(rng);
    return Q;
}

Mat rand_mat(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Mat M(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = U(rng);
    return M;
}

}  // namespace

TEST_CASE("matrix basics") {
    Mat A(2);
    A(0, 0) = 1.0; A(0, 1) = 2.0; A(1, 0) = 3.0; A(1, 1) = 4.0;
    CHECK(trace(A) == 5.0);
    Mat At = transpose(A);
    CHECK(At(0, 1) == 3.0);
    CHECK(frob_dot(A, A) == doctest::Approx(30.0));
    Mat C = commutator(A, At);
    CHECK(trace(C) == doctest::Approx(0.0));
    Mat I = identity(3);
    CHECK(trace(I) == 3.0);
}

TEST_CASE("promote embeds the spatial block") {
    Mat A(2);
    A(0, 0) = 1.5; A(0, 1) = -2.0; A(1, 0) = 0.5; A(1, 1) = 3.0;
    Mat B = promote(A, 3);
    CHECK(B.d == 3);
    CHECK(B(0, 0) == 1.5);
    CHECK(B(1, 0) == 0.5);
    for (int k = 0; k < 3; ++k) {
        CHECK(B(2, k) == 0.0);
        CHECK(B(k, 2) == 0.0);
    }
}

TEST_CASE("uniaxial tensors") {
    QTensor Q2 = uniaxial(1.0, {1.0, 0.0, 0.0}, 2);
    CHECK(Q2.q[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(Q2.q[1] == doctest::Approx(0.0));

    QTensor Q3 = uniaxial(1.0, {1.0, 0.0, 0.0}, 3);
    Mat M = to_matrix(Q3);
    CHECK(M(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(M(1, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(M(2, 2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(uniaxial(1.0, {2.0, 0.0, 0.0}, 2), std::invalid_argument);
}

TEST_CASE("coefficient round trip keeps trace exactly zero") {
    std::mt19937_64 rng(11);
    for (int d : {2, 3})
        for (int s = 0; s < 50; ++s) {
            QTensor Q = rand_q(rng, d);
            Mat M = to_matrix(Q);
            CHECK(trace(M) == 0.0);  // exact by construction
            QTensor R = from_matrix(M);
            for (int c = 0; c < ncoef(d); ++c) CHECK(R.q[c] == doctest::Approx(Q.q[c]).epsilon(1e-14));
            CHECK(trQ2(Q) == doctest::Approx(frob_dot(M, M)).epsilon(1e-14));
        }
}

TEST_CASE("from_matrix symmetrizes and removes trace") {
    std::mt19937_64 rng(12);
    Mat M = rand_mat(rng, 3);
    QTensor Q = from_matrix(M);
    Mat S = to_matrix(Q);
    // compare against the explicit projection
    Mat P = 0.5 * (M + transpose(M));
    const double tr = trace(P) / 3.0;
    for (int i = 0; i < 3; ++i) P(i, i) -= tr;
    CHECK(frob_norm(S - P) <= 1e-14);
}

TEST_CASE("bulk potential frozen values") {
    MaterialParams p;
    p.a = 1.0; p.b = 1.0; p.c = 1.0;

    QTensor Q2(2);
    Q2.q[0] = 0.5;  // diag(1/2, -1/2)
    CHECK(bulk_energy_fB(Q2, p) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));

    QTensor Q3 = uniaxial(1.0, {1.0, 0.0, 0.0}, 3);
    CHECK(bulk_energy_fB(Q3, p) == doctest::Approx(10.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("lower order term on the frozen sample") {
    MaterialParams p;
    p.a = 1.0; p.b = 0.0; p.c = 1.0;
    QTensor Q(2);
    Q.q[0] = 0.5;
    Mat L = lower_order_L(Q, p);
    Mat M = to_matrix(Q);
    // L = -aQ - c trQ^2 Q = -(3/2) Q here
    CHECK(frob_norm(L - (-1.5) * M) <= 1e-15);
}

TEST_CASE("gradient identity and FD cross-check") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int d : {2, 3})
        for (int s = 0; s < 40; ++s) {
            MaterialParams p;
            p.a = U(rng); p.b = U(rng); p.c = 1.0 + 0.5 * U(rng);
            QTensor Q = rand_q(rng, d);
            Mat gf = grad_fB(Q, p);
            Mat E = lower_order_L(Q, p) + (p.b / d) * trQ2(Q) * identity(d) + gf;
            CHECK(frob_norm(E) <= 1e-12 * (1.0 + frob_norm(gf)));

            const double h = 1e-6;
            for (int c = 0; c < ncoef(d); ++c) {
                QTensor qp = Q, qm = Q;
                qp.q[c] += h;
                qm.q[c] -= h;
                const double fd = (bulk_energy_fB(qp, p) - bulk_energy_fB(qm, p)) / (2.0 * h);
                QTensor e(d);
                e.q[c] = 1.0;
                CHECK(std::abs(fd - frob_dot(gf, to_matrix(e))) <= 1e-6);
            }
        }
}

TEST_CASE("corotation term structure and contraction") {
    std::mt19937_64 rng(14);
    for (int d : {2, 3})
        for (int s = 0; s < 60; ++s) {
            Mat gu = rand_mat(rng, d);
            QTensor Q = rand_q(rng, d);
            Mat S = corotation_S(gu, Q);
            CHECK(std::abs(trace(S)) <= 1e-12);
            CHECK(frob_norm(S - transpose(S)) <= 1e-12);

            Mat G = to_matrix(rand_q(rng, d));  // symmetric test direction
            const double lhs = frob_dot(S, G);
            const double rhs = frob_dot(gu, G * to_matrix(Q) - to_matrix(Q) * G);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs)));
        }
}

TEST_CASE("coupling stress is skew and cancels the corotation work") {
    std::mt19937_64 rng(15);
    for (int d : {2, 3})
        for (int s = 0; s < 60; ++s) {
            Mat gu = rand_mat(rng, d);
            QTensor Qt = rand_q(rng, d);
            Mat R = to_matrix(rand_q(rng, d));
            Mat sig = sigma_stress(Qt, R);
            CHECK(frob_norm(sig + transpose(sig)) <= 1e-12 * (1.0 + frob_norm(sig)));
            const double t1 = frob_dot(corotation_S(gu, Qt), R);
            const double t2 = frob_dot(sig, gu);
            CHECK(std::abs(t1 + t2) <= 1e-12 * (1.0 + std::abs(t1) + std::abs(t2)));
        }
}

TEST_CASE("molecular field composition") {
    std::mt19937_64 rng(16);
    MaterialParams p;
    p.a = -0.3; p.b = 0.4; p.c = 1.2; p.lambda = 0.7;
    QTensor Q = rand_q(rng, 3), lap = rand_q(rng, 3);
    Mat H = molecular_H(Q, lap, p);
    Mat ref = p.lambda * to_matrix(lap) + lower_order_L(Q, p);
    CHECK(frob_norm(H - ref) <= 1e-14);
}

TEST_CASE("viscosity families") {
    ViscositySpec v;
    v.nu0 = 2.5;
    QTensor Q(2);
    Q.q[0] = 0.5;
    CHECK(viscosity_nu(Q, v) == 2.5);

    v.family = ViscosityFamily::rational;
    v.nu0 = 1.0;
    v.nu1 = 1.0;
    // trQ2 = 1/2 here, so nu = 1 + (1/2)/(3/2) = 4/3
    CHECK(viscosity_nu(Q, v) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    // rational family stays within [nu0, nu0 + nu1]
    std::mt19937_64 rng(17);
    for (int s = 0; s < 100; ++s) {
        QTensor R = rand_q(rng, 3);
        const double nu = viscosity_nu(R, v);
        CHECK(nu >= v.nu0);
        CHECK(nu <= v.nu0 + v.nu1);
    }
}

TEST_CASE("bulk envelope lower bound") {
    MaterialParams p;
    p.a = -0.2; p.b = 0.0; p.c = 1.0;
    // min over x of a x/2 + c x^2/4 is -a^2/(4c)
    CHECK(bulk_min_fB(p, 2) == doctest::Approx(-0.01).epsilon(1e-6));

    p.a = 0.3;
    CHECK(bulk_min_fB(p, 2) == doctest::Approx(0.0).epsilon(1e-12));

    // the envelope really bounds sampled values
    p.a = -0.5; p.b = 0.8; p.c = 1.3;
    const double lo = bulk_min_fB(p, 3);
    std::mt19937_64 rng(18);
    for (int s = 0; s < 200; ++s)
        CHECK(bulk_energy_fB(rand_q(rng, 3), p) >= lo - 1e-12);
}

TEST_CASE("parameter validation") {
    MaterialParams p;
    p.c = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.c = 1.0;
    p.lambda = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.lambda = 1.0;
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    ViscositySpec v;
    v.nu0 = 0.0;
    CHECK_THROWS_AS(v.validate(), std::invalid_argument);
    v.nu0 = 1.0;
    v.nu1 = -0.1;
    CHECK_THROWS_AS(v.validate(), std::invalid_argument);
}

TEST_CASE("stretch and vorticity split") {
    std::mt19937_64 rng(19);
    Mat A = rand_mat(rng, 3);
    Mat D = stretch_D(A), W = vorticity_W(A);
    CHECK(frob_norm(D - transpose(D)) <= 1e-15);
    CHECK(frob_norm(W + transpose(W)) <= 1e-15);
    CHECK(frob_norm(D + W - A) <= 1e-15);
}
