#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "qflow/ops.hpp"
#include "qflow/verify.hpp"

using namespace qflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridSpec dgrid(int n) { return {n, n, 1.0, 1.0, Bc::dirichlet0}; }
GridSpec pgrid(int n) { return {n, n, 1.0, 1.0, Bc::periodic}; }

double mu_sine(int k, double h) {
    const double s = std::sin(0.5 * kPi * k * h);
    return 4.0 / (h * h) * s * s;
}

}  // namespace

TEST_CASE("grid validation and layout") {
    GridSpec g{3, 8, 1.0, 1.0, Bc::dirichlet0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = {8, 8, -1.0, 1.0, Bc::dirichlet0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g = dgrid(8);
    CHECK(g.hx() == doctest::Approx(0.125));
    CHECK(cid(g, 1, 2) == 17);
    CHECK(uid(g, 0, 1) == 9);   // u rows have nx + 1 entries
    CHECK(vid(g, 3, 1) == 11);
    CHECK(g.xc(0) == doctest::Approx(0.0625));
}

TEST_CASE("ghost closures") {
    GridSpec g = dgrid(4);
    std::vector<double> a(16);
    for (int k = 0; k < 16; ++k) a[k] = k + 1.0;
    // odd: reflected with sign flip
    CHECK(cc_get(a, g, -1, 0, Closure::odd) == -a[cid(g, 0, 0)]);
    CHECK(cc_get(a, g, 4, 2, Closure::odd) == -a[cid(g, 3, 2)]);
    CHECK(cc_get(a, g, 1, -1, Closure::odd) == -a[cid(g, 1, 0)]);
    // copy: even reflection
    CHECK(cc_get(a, g, -1, 0, Closure::copy) == a[cid(g, 0, 0)]);
    CHECK(cc_get(a, g, 1, 4, Closure::copy) == a[cid(g, 1, 3)]);
    // wrap
    GridSpec gp = pgrid(4);
    CHECK(cc_get(a, gp, -1, 2, Closure::wrap) == a[cid(gp, 3, 2)]);
    CHECK(cc_get(a, gp, 4, 1, Closure::wrap) == a[cid(gp, 0, 1)]);
    // corner double reflection
    CHECK(cc_get(a, g, -1, -1, Closure::odd) == a[cid(g, 0, 0)]);
}

TEST_CASE("discrete sine modes are exact Laplacian eigenfunctions") {
    for (int n : {8, 16, 32})
        for (int k : {1, 2, 3}) {
            GridSpec g = dgrid(n);
            ScalarField f(g);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    f.at(i, j) = std::sin(kPi * k * g.xc(i)) * std::sin(kPi * (k + 1) * g.yc(j));
            ScalarField lap = laplacian_scalar(f, Closure::odd);
            const double mu = mu_sine(k, g.hx()) + mu_sine(k + 1, g.hy());
            double worst = 0.0;
            for (size_t m = 0; m < f.a.size(); ++m)
                worst = std::max(worst, std::abs(lap.a[m] + mu * f.a[m]));
            CHECK(worst <= 1e-11 * mu);
        }
}

TEST_CASE("periodic trigonometric modes are exact eigenfunctions") {
    const int n = 16;
    GridSpec g = pgrid(n);
    ScalarField f(g);
    const int k = 2, l = 3;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            f.at(i, j) = std::cos(2.0 * kPi * (k * g.xc(i) + l * g.yc(j)) + 0.4);
    ScalarField lap = laplacian_scalar(f, Closure::wrap);
    const double sx = std::sin(kPi * k * g.hx()), sy = std::sin(kPi * l * g.hy());
    const double mu = 4.0 / (g.hx() * g.hx()) * sx * sx + 4.0 / (g.hy() * g.hy()) * sy * sy;
    double worst = 0.0;
    for (size_t m = 0; m < f.a.size(); ++m)
        worst = std::max(worst, std::abs(lap.a[m] + mu * f.a[m]));
    CHECK(worst <= 1e-11 * mu);
}

TEST_CASE("laplacian second order on smooth periodic data") {
    auto err = [](int n) {
        GridSpec g = pgrid(n);
        ScalarField f(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = g.xc(i), y = g.yc(j);
                f.at(i, j) = std::sin(2.0 * kPi * x) * std::exp(std::cos(2.0 * kPi * y));
            }
        ScalarField lap = laplacian_scalar(f, Closure::wrap);
        double worst = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = g.xc(i), y = g.yc(j);
                const double c = std::cos(2.0 * kPi * y), s2 = std::sin(2.0 * kPi * y);
                const double ex = std::exp(c);
                const double fxx = -4.0 * kPi * kPi * std::sin(2.0 * kPi * x) * ex;
                const double fyy = std::sin(2.0 * kPi * x) * ex * 4.0 * kPi * kPi * (s2 * s2 - c);
                worst = std::max(worst, std::abs(lap.at(i, j) - (fxx + fyy)));
            }
        return worst;
    };
    const double e1 = err(16), e2 = err(32), e3 = err(64);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("q gradient second order and componentwise") {
    auto err = [](int n) {
        GridSpec g = pgrid(n);
        QField Q(g, 2);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                Q.at(i, j, 0) = std::sin(2.0 * kPi * g.xc(i));
                Q.at(i, j, 1) = std::cos(2.0 * kPi * g.yc(j));
            }
        auto [dx, dy] = grad_q(Q);
        double worst = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(dx.at(i, j, 0) -
                                                 2.0 * kPi * std::cos(2.0 * kPi * g.xc(i))));
                worst = std::max(worst, std::abs(dy.at(i, j, 1) +
                                                 2.0 * kPi * std::sin(2.0 * kPi * g.yc(j))));
                worst = std::max(worst, std::abs(dx.at(i, j, 1)));
                worst = std::max(worst, std::abs(dy.at(i, j, 0)));
            }
        return worst;
    };
    CHECK(std::log2(err(16) / err(32)) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("summation by parts: matrix divergence against vector gradient") {
    // periodic pairing <div F, w> + <F, grad w> = 0 to rounding
    const int n = 24;
    GridSpec g = pgrid(n);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    MatField F(g, 2);
    for (double& x : F.a) x = U(rng);
    VecField w = random_smooth_vec(g, 77);

    VecField dv = div_matrix(F, Closure::wrap);
    auto [ddx, ddy] = grad_vec(w, Closure::wrap);
    double s = 0.0, mass = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int c = cid(g, i, j);
            const double t1 = dv.x[c] * w.x[c] + dv.y[c] * w.y[c];
            const double t2 = F.at(i, j, 0, 0) * ddx.x[c] + F.at(i, j, 0, 1) * ddy.x[c] +
                              F.at(i, j, 1, 0) * ddx.y[c] + F.at(i, j, 1, 1) * ddy.y[c];
            s += t1 + t2;
            mass += std::abs(t1) + std::abs(t2);
        }
    CHECK(std::abs(s) <= 1e-12 * mass);
}

TEST_CASE("face divergence of face gradient equals the cell Laplacian") {
    for (auto bc : {Bc::dirichlet0, Bc::periodic}) {
        const int n = 12;
        GridSpec g{n, n, 1.0, 1.3, bc};
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        ScalarField p(g);
        for (double& x : p.a) x = U(rng);
        const Closure cl = bc == Bc::periodic ? Closure::wrap : Closure::copy;
        VelocityField gp = grad_to_faces(p, cl);
        ScalarField d = div_mac(gp);
        ScalarField lap = laplacian_scalar(p, cl);
        double worst = 0.0, scale = 0.0;
        for (size_t m = 0; m < d.a.size(); ++m) {
            worst = std::max(worst, std::abs(d.a[m] - lap.a[m]));
            scale = std::max(scale, std::abs(lap.a[m]));
        }
        CHECK(worst <= 1e-12 * (1.0 + scale));
    }
}

TEST_CASE("elastic stress is symmetric with the expected entries") {
    const int n = 16;
    GridSpec g = pgrid(n);
    QField Q = random_smooth_q(g, 2, 31);
    MatField tau = ericksen_tau(Q, 0.8);
    auto [dx, dy] = grad_q(Q);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            CHECK(tau.at(i, j, 0, 1) == tau.at(i, j, 1, 0));
            CHECK(tau.at(i, j, 0, 0) ==
                  doctest::Approx(-0.8 * qdot(dx.qten(i, j), dx.qten(i, j))).epsilon(1e-13));
            CHECK(tau.at(i, j, 0, 0) <= 0.0);  // diagonal entries are -lambda |d Q|^2
        }
}

TEST_CASE("advection of a linear field by a uniform velocity is exact") {
    const int n = 16;
    GridSpec g = dgrid(n);
    VelocityField vel(g);
    for (double& x : vel.u) x = 0.3;
    for (double& x : vel.v) x = -0.2;
    QField Q(g, 2);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Q.at(i, j, 0) = 2.0 * g.xc(i) - g.yc(j) + 0.5;
            Q.at(i, j, 1) = -g.xc(i) + 3.0 * g.yc(j);
        }
    QField adv = convect_q(vel, Q);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            CHECK(adv.at(i, j, 0) == doctest::Approx(0.3 * 2.0 + (-0.2) * (-1.0)).epsilon(1e-13));
            CHECK(adv.at(i, j, 1) == doctest::Approx(0.3 * (-1.0) + (-0.2) * 3.0).epsilon(1e-13));
        }
}

TEST_CASE("momentum advection of a uniform periodic stream vanishes") {
    GridSpec g = pgrid(8);
    VelocityField vel(g);
    for (double& x : vel.u) x = 0.7;
    for (double& x : vel.v) x = -0.4;
    VelocityField out = convect_u(vel);
    for (double x : out.u) CHECK(std::abs(x) <= 1e-14);
    for (double x : out.v) CHECK(std::abs(x) <= 1e-14);
}

TEST_CASE("centered velocity gradient is exact on affine data") {
    const int n = 16;
    GridSpec g = dgrid(n);
    VelocityField vel(g);
    // u = 2x - y, v = 0.5x + 3y at the respective face positions
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) vel.uat(i, j) = 2.0 * (i * g.hx()) - g.yc(j);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) vel.vat(i, j) = 0.5 * g.xc(i) + 3.0 * (j * g.hy());
    MatField gu = gradu_center(vel);
    VecField uc = velocity_at_centers(vel);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            CHECK(gu.at(i, j, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(gu.at(i, j, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(gu.at(i, j, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(gu.at(i, j, 1, 1) == doctest::Approx(3.0).epsilon(1e-12));
            CHECK(uc.x[cid(g, i, j)] ==
                  doctest::Approx(2.0 * g.xc(i) - g.yc(j)).epsilon(1e-12));
        }
}

TEST_CASE("two stress divergence paths agree at second order") {
    auto err = [](int n) {
        GridSpec g = pgrid(n);
        MatField F(g, 2);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = g.xc(i), y = g.yc(j);
                F.at(i, j, 0, 0) = std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
                F.at(i, j, 0, 1) = std::cos(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
                F.at(i, j, 1, 0) = std::sin(2.0 * kPi * y);
                F.at(i, j, 1, 1) = std::cos(2.0 * kPi * (x + y));
            }
        VelocityField df = div_stress_faces(F);
        double worst = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 1; i < n; ++i) {
                const double x = i * g.hx(), y = g.yc(j);
                // d/dx F00 + d/dy F01 evaluated at the u face
                const double exact =
                    4.0 * kPi * std::cos(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
                worst = std::max(worst, std::abs(df.uat(i, j) - exact));
            }
        return worst;
    };
    CHECK(std::log2(err(16) / err(32)) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("coefficient metric matches the Frobenius product") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int d : {2, 3})
        for (int s = 0; s < 50; ++s) {
            QTensor A(d), B(d);
            for (int c = 0; c < ncoef(d); ++c) { A.q[c] = U(rng); B.q[c] = U(rng); }
            CHECK(qdot(A, B) ==
                  doctest::Approx(frob_dot(to_matrix(A), to_matrix(B))).epsilon(1e-13));
        }
}

TEST_CASE("inner products carry the cell area") {
    GridSpec g{8, 8, 2.0, 3.0, Bc::dirichlet0};
    ScalarField one(g);
    for (double& x : one.a) x = 1.0;
    CHECK(dot_cc(one, one) == doctest::Approx(6.0).epsilon(1e-14));

    VelocityField vel(g);
    for (double& x : vel.u) x = 2.0;
    const double area = g.cell_area();
    CHECK(dot_mac(vel, vel) == doctest::Approx(4.0 * 9 * 8 * area).epsilon(1e-14));
}

TEST_CASE("divergence reports the worst cell") {
    GridSpec g = dgrid(8);
    VelocityField vel(g);
    vel.uat(4, 3) = 1.0;  // single face in the interior
    CHECK(max_abs_div(vel) == doctest::Approx(8.0).epsilon(1e-14));
}
