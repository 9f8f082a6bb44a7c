#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "qflow/solve.hpp"
#include "qflow/verify.hpp"

using namespace qflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mu_sine(int k, double h) {
    const double s = std::sin(0.5 * kPi * k * h);
    return 4.0 / (h * h) * s * s;
}

ScalarField sine_mode(const GridSpec& g, int k, int l) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) = std::sin(kPi * k * g.xc(i)) * std::sin(kPi * l * g.yc(j));
    return f;
}

}  // namespace

TEST_CASE("poisson solve is exact on a discrete eigenmode") {
    GridSpec g{16, 16, 1.0, 1.0, Bc::dirichlet0};
    const int k = 2, l = 3;
    ScalarField phi = sine_mode(g, k, l);
    const double mu = mu_sine(k, g.hx()) + mu_sine(l, g.hy());
    ScalarField rhs(g);
    for (size_t m = 0; m < rhs.a.size(); ++m) rhs.a[m] = mu * phi.a[m];

    SolverConfig cfg;
    cfg.tol = 1e-12;
    SolveStats st;
    ScalarField x = solve_poisson(rhs, cfg, Closure::odd, &st);
    double worst = 0.0;
    for (size_t m = 0; m < x.a.size(); ++m)
        worst = std::max(worst, std::abs(x.a[m] - phi.a[m]));
    CHECK(worst <= 1e-10);
    CHECK(st.iterations >= 1);
    CHECK(st.final_residual <= cfg.tol * mu * 16.0);  // |rhs| < mu * sqrt(cells)
}

TEST_CASE("singular closures demand a zero-mean right side") {
    GridSpec g{16, 16, 1.0, 1.0, Bc::dirichlet0};
    ScalarField rhs(g);
    for (double& x : rhs.a) x = 1.0;
    SolverConfig cfg;
    CHECK_THROWS_AS(solve_poisson(rhs, cfg, Closure::copy), std::invalid_argument);

    // zero-mean data solves, and the answer is zero-mean and consistent
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (double& x : rhs.a) x = U(rng);
    double mean = 0.0;
    for (double x : rhs.a) mean += x;
    mean /= rhs.a.size();
    for (double& x : rhs.a) x -= mean;

    cfg.tol = 1e-12;
    ScalarField q = solve_poisson(rhs, cfg, Closure::copy);
    double qm = 0.0;
    for (double x : q.a) qm += x;
    CHECK(std::abs(qm / q.a.size()) <= 1e-12);
    ScalarField lap = laplacian_scalar(q, Closure::copy);
    double worst = 0.0;
    for (size_t m = 0; m < lap.a.size(); ++m)
        worst = std::max(worst, std::abs(-lap.a[m] - rhs.a[m]));
    CHECK(worst <= 1e-8);
}

TEST_CASE("iteration cap raises a typed error with diagnostics") {
    GridSpec g{16, 16, 1.0, 1.0, Bc::dirichlet0};
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField rhs(g);
    for (double& x : rhs.a) x = U(rng);
    SolverConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_iter = 2;
    try {
        solve_poisson(rhs, cfg, Closure::odd);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.iterations == 2);
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("jacobi preconditioning changes the path, not the answer") {
    GridSpec g{24, 24, 1.0, 1.0, Bc::dirichlet0};
    QField Q = random_smooth_q(g, 2, 17, 0.4);
    ViscositySpec visc{ViscosityFamily::rational, 0.5, 1.5};
    VelocityField u0 = random_mac_velocity(g, 19);
    VelocityField f(g);

    SolverConfig plain;
    plain.tol = 1e-12;
    SolverConfig pc = plain;
    pc.pc = SolverConfig::Pc::jacobi;
    MomentumResult a = momentum_solve(u0, f, Q, visc, 0.05, plain);
    MomentumResult b = momentum_solve(u0, f, Q, visc, 0.05, pc);
    double worst = 0.0;
    for (size_t k = 0; k < a.vel.u.size(); ++k)
        worst = std::max(worst, std::abs(a.vel.u[k] - b.vel.u[k]));
    for (size_t k = 0; k < a.vel.v.size(); ++k)
        worst = std::max(worst, std::abs(a.vel.v[k] - b.vel.v[k]));
    CHECK(worst <= 1e-8);
    CHECK(b.visc.iterations >= 1);
}

TEST_CASE("viscous operator is symmetric and dissipative") {
    for (auto bc : {Bc::dirichlet0, Bc::periodic}) {
        GridSpec g{12, 12, 1.0, 1.0, bc};
        QField Q = random_smooth_q(g, 2, 23, 0.5);
        ViscositySpec visc{ViscosityFamily::rational, 0.7, 2.0};
        ViscousOp op(Q, visc, 0.2);

        VelocityField x = random_mac_velocity(g, 29);
        VelocityField y = random_mac_velocity(g, 31);
        VelocityField Ax(g), Ay(g);
        op.apply(x.u, x.v, Ax.u, Ax.v);
        op.apply(y.u, y.v, Ay.u, Ay.v);

        const double s1 = dot_mac(Ax, y), s2 = dot_mac(x, Ay);
        CHECK(std::abs(s1 - s2) <= 1e-12 * (std::abs(s1) + 1.0));

        // quadratic form of the dt-part recovers the dissipation integral
        const double form = (dot_mac(Ax, x) - dot_mac(x, x)) / op.dt;
        const double diss = op.dissipation(x);
        CHECK(diss >= 0.0);
        CHECK(form == doctest::Approx(diss).epsilon(1e-12));

        // viscosity samples stay inside the declared bounds
        for (double nu : op.nu_cell) {
            CHECK(nu >= visc.nu0);
            CHECK(nu <= visc.nu0 + visc.nu1);
        }
    }
}

TEST_CASE("projection removes divergence and is idempotent") {
    for (auto bc : {Bc::dirichlet0, Bc::periodic}) {
        GridSpec g{32, 32, 1.0, 1.0, bc};
        VelocityField v = random_mac_velocity(g, 37);
        const double div0 = max_abs_div(v);
        CHECK(div0 > 1e-2);  // the input must genuinely carry divergence

        SolverConfig cfg;
        cfg.tol = 1e-12;
        ProjectionResult p1 = helmholtz_project(v, cfg);
        CHECK(max_abs_div(p1.vel) <= 1e-7 * div0);

        ProjectionResult p2 = helmholtz_project(p1.vel, cfg);
        double worst = 0.0;
        for (size_t k = 0; k < v.u.size(); ++k)
            worst = std::max(worst, std::abs(p2.vel.u[k] - p1.vel.u[k]));
        for (size_t k = 0; k < v.v.size(); ++k)
            worst = std::max(worst, std::abs(p2.vel.v[k] - p1.vel.v[k]));
        CHECK(worst <= 1e-9 * (1.0 + norm_mac(p1.vel)));

        // orthogonality and contraction
        VelocityField r = v;
        for (size_t k = 0; k < r.u.size(); ++k) r.u[k] -= p1.vel.u[k];
        for (size_t k = 0; k < r.v.size(); ++k) r.v[k] -= p1.vel.v[k];
        const double cross = dot_mac(p1.vel, r);
        CHECK(std::abs(cross) <= 1e-9 * (1.0 + dot_mac(v, v)));
        CHECK(norm_mac(p1.vel) <= norm_mac(v) * (1.0 + 1e-12));
    }
}

TEST_CASE("pure gradients project to zero") {
    for (auto bc : {Bc::dirichlet0, Bc::periodic}) {
        GridSpec g{24, 24, 1.0, 1.0, bc};
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        ScalarField p(g);
        for (double& x : p.a) x = U(rng);
        const Closure cl = bc == Bc::periodic ? Closure::wrap : Closure::copy;
        VelocityField v = grad_to_faces(p, cl);

        SolverConfig cfg;
        cfg.tol = 1e-12;
        ProjectionResult res = helmholtz_project(v, cfg);
        CHECK(norm_mac(res.vel) <= 1e-7 * (1.0 + norm_mac(v)));
    }
}

TEST_CASE("unforced momentum decays") {
    GridSpec g{24, 24, 1.0, 1.0, Bc::dirichlet0};
    SolverConfig cfg;
    cfg.tol = 1e-12;
    VelocityField u0 = helmholtz_project(random_mac_velocity(g, 43), cfg).vel;
    QField Q(g, 2);
    ViscositySpec visc;
    visc.nu0 = 2.0;
    VelocityField f(g);
    MomentumResult r = momentum_solve(u0, f, Q, visc, 0.01, cfg);
    CHECK(norm_mac(r.vel) < norm_mac(u0));
    CHECK(max_abs_div(r.vel) <= 1e-8);
    // larger steps damp harder
    MomentumResult r2 = momentum_solve(u0, f, Q, visc, 0.1, cfg);
    CHECK(norm_mac(r2.vel) < norm_mac(r.vel));
}

TEST_CASE("implicit q solve matches the closed-form mode response") {
    GridSpec g{16, 16, 1.0, 1.0, Bc::dirichlet0};
    const int k = 1, l = 2;
    ScalarField phi = sine_mode(g, k, l);
    const double mu = mu_sine(k, g.hx()) + mu_sine(l, g.hy());
    const double dt = 0.02, gl = 0.8;
    for (double eps : {0.0, 2e-3}) {
        for (int d : {2, 3}) {
            QField rhs(g, d);
            QTensor dir(d);
            for (int c = 0; c < ncoef(d); ++c) dir.q[c] = 0.3 + 0.2 * c;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    for (int c = 0; c < ncoef(d); ++c) rhs.at(i, j, c) = phi.at(i, j) * dir.q[c];
            SolverConfig cfg;
            cfg.tol = 1e-13;
            SolveStats st;
            QField x = solve_q_implicit(rhs, dt, eps, gl, cfg, &st);
            const double amp = 1.0 / (1.0 + dt * (eps * mu * mu + gl * mu));
            double worst = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    for (int c = 0; c < ncoef(d); ++c)
                        worst = std::max(worst, std::abs(x.at(i, j, c) -
                                                         amp * phi.at(i, j) * dir.q[c]));
            CHECK(worst <= 1e-9);
            CHECK(st.final_residual <= 1e-9);
        }
    }
}
