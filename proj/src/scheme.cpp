#include "qflow/scheme.hpp"

#include <cmath>

namespace qflow {

void SchemeConfig::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("scheme dt must be > 0");
    if (eps < 0.0) throw std::invalid_argument("scheme eps must be >= 0");
    if (mode == SchemeMode::regularized && eps <= 0.0)
        throw std::invalid_argument("regularized mode requires eps > 0");
    if (picard_tol <= 0.0) throw std::invalid_argument("picard_tol must be > 0");
    if (picard_max < 1) throw std::invalid_argument("picard_max must be >= 1");
    mat.validate();
    visc.validate();
}

namespace {

QField qfield_sub(const QField& A, const QField& B) {
    QField out = A;
    for (size_t k = 0; k < out.a.size(); ++k) out.a[k] -= B.a[k];
    return out;
}

VelocityField vel_sub(const VelocityField& A, const VelocityField& B) {
    VelocityField out = A;
    for (size_t k = 0; k < out.u.size(); ++k) out.u[k] -= B.u[k];
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] -= B.v[k];
    return out;
}

// sigma(Qa, Q) stress divergence on faces, using the spatial 2x2 block
VelocityField sigma_force(const QField& Qa, const QField& lapQ) {
    const GridSpec& g = Qa.g;
    MatField sig(g, 2);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Mat s = sigma_stress(Qa.qten(i, j), to_matrix(lapQ.qten(i, j)));
            Mat s2(2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) s2(r, c) = s(r, c);
            sig.set(i, j, s2);
        }
    return div_stress_faces(sig);
}

}  // namespace

double state_norm_h1h2(const VelocityField& du, const QField& dQ) {
    auto [dx, dy] = grad_q(dQ);
    const QField lap = laplacian_q(dQ);
    const double s = dot_mac(du, du) + dot_q(dQ, dQ) + dot_q(dx, dx) + dot_q(dy, dy) +
                     dot_q(lap, lap);
    return std::sqrt(s);
}

NonlinearRhs nonlinear_rhs(const VelocityField& u, const QField& Q, const QField& Qt,
                           const SchemeConfig& cfg) {
    const GridSpec& g = Q.g;
    const int d = Q.d;
    const MatField gu = gradu_center(u);
    const VecField uc = velocity_at_centers(u);
    const QField lapQ = laplacian_q(Q);
    const MatField tau = ericksen_tau(Q, cfg.mat.lambda);
    const QField dQt = qfield_sub(Q, Qt);

    MatField stress(g, 2);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const QTensor q = Q.qten(i, j);
            const double dnu = viscosity_nu(q, cfg.visc) - viscosity_nu(Qt.qten(i, j), cfg.visc);
            const Mat D2 = stretch_D(gu.mat(i, j));
            const Mat sig = sigma_stress(dQt.qten(i, j), to_matrix(lapQ.qten(i, j)));
            const double ux = uc.x[cid(g, i, j)], uy = uc.y[cid(g, i, j)];
            Mat s2(2);
            s2(0, 0) = dnu * D2(0, 0) + tau.at(i, j, 0, 0) + sig(0, 0) - ux * ux;
            s2(0, 1) = dnu * D2(0, 1) + tau.at(i, j, 0, 1) + sig(0, 1) - ux * uy;
            s2(1, 0) = dnu * D2(1, 0) + tau.at(i, j, 1, 0) + sig(1, 0) - uy * ux;
            s2(1, 1) = dnu * D2(1, 1) + tau.at(i, j, 1, 1) + sig(1, 1) - uy * uy;
            stress.set(i, j, s2);
        }
    NonlinearRhs rhs;
    rhs.F = helmholtz_project(div_stress_faces(stress), cfg.inner).vel;

    rhs.G = convect_q(u, Q);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Mat W = promote(gu.mat(i, j), d);
            const Mat S = corotation_S(W, dQt.qten(i, j));
            const Mat L = lower_order_L(Q.qten(i, j), cfg.mat);
            const QTensor add = from_matrix(S + cfg.mat.gamma * L);
            for (int c = 0; c < rhs.G.nc(); ++c)
                rhs.G.at(i, j, c) = -rhs.G.at(i, j, c) + add.q[c];
        }
    return rhs;
}

State linearized_solve(const State& base, const QField& Qt, const VelocityField& F,
                       const QField& G, const QField& Q_couple, const SchemeConfig& cfg) {
    const GridSpec& g = base.Q.g;
    const double dt = cfg.dt;

    VelocityField forces = sigma_force(Qt, laplacian_q(Q_couple));
    for (size_t k = 0; k < forces.u.size(); ++k) forces.u[k] += F.u[k];
    for (size_t k = 0; k < forces.v.size(); ++k) forces.v[k] += F.v[k];
    MomentumResult mres = momentum_solve(base.u, forces, Qt, cfg.visc, dt, cfg.inner);

    const MatField gu = gradu_center(mres.vel);
    QField qrhs = base.Q;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Mat S = corotation_S(promote(gu.mat(i, j), base.Q.d), Qt.qten(i, j));
            const QTensor Sq = from_matrix(S);
            for (int c = 0; c < qrhs.nc(); ++c)
                qrhs.at(i, j, c) += dt * (Sq.q[c] + G.at(i, j, c));
        }
    State out;
    out.t = base.t + dt;
    out.u = std::move(mres.vel);
    out.Q = solve_q_implicit(qrhs, dt, cfg.eps_effective(), cfg.mat.gamma * cfg.mat.lambda,
                             cfg.inner);
    return out;
}

PicardResult picard_step(const State& base, const SchemeConfig& cfg) {
    const QField& Qt = base.Q;
    PicardResult res;
    res.state.t = base.t;
    res.state.u = base.u;
    res.state.Q = base.Q;
    for (int k = 0; k < cfg.picard_max; ++k) {
        const NonlinearRhs rhs = nonlinear_rhs(res.state.u, res.state.Q, Qt, cfg);
        State next = linearized_solve(base, Qt, rhs.F, rhs.G, res.state.Q, cfg);
        const double r = state_norm_h1h2(vel_sub(next.u, res.state.u),
                                         qfield_sub(next.Q, res.state.Q));
        res.state = std::move(next);
        res.report.residuals.push_back(r);
        res.report.iterations = k + 1;
        if (r <= cfg.picard_tol) {
            res.report.converged = true;
            break;
        }
    }
    const auto& rr = res.report.residuals;
    if (rr.size() >= 2 && rr.front() > 0.0) {
        double logsum = 0.0;
        int cnt = 0;
        for (size_t k = 1; k < rr.size(); ++k) {
            if (rr[k - 1] > 0.0 && rr[k] > 0.0) {
                logsum += std::log(rr[k] / rr[k - 1]);
                ++cnt;
            }
        }
        res.report.rho = cnt > 0 ? std::exp(logsum / cnt) : 0.0;
    }
    if (!res.report.converged)
        throw StepRejected(rr.empty() ? 0.0 : rr.back(), res.report.iterations);
    return res;
}

double fixed_point_residual(const State& base, const State& converged, const SchemeConfig& cfg) {
    const NonlinearRhs rhs = nonlinear_rhs(converged.u, converged.Q, base.Q, cfg);
    const State again = linearized_solve(base, base.Q, rhs.F, rhs.G, converged.Q, cfg);
    return state_norm_h1h2(vel_sub(again.u, converged.u), qfield_sub(again.Q, converged.Q));
}

BoundaryLapQ boundary_lapq(const QField& Q) {
    BoundaryLapQ out{0.0, 0.0};
    const GridSpec& g = Q.g;
    if (g.bc == Bc::periodic) return out;
    const QField R = laplacian_q(Q);
    const Closure cl = default_closure(g);
    const int nc = R.nc();
    auto trace = [&](int i, int j, int gi, int gj, int c) {
        // wall midpoint between the interior cell and the closure ghost
        return 0.5 * (R.at(i, j, c) + cc_get(R.a, g, gi, gj, cl, nc, c));
    };
    auto extrap = [&](double f0, double f1, double f2) {
        return (15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0;
    };
    for (int c = 0; c < nc; ++c) {
        for (int j = 0; j < g.ny; ++j) {
            out.closure_trace = std::max({out.closure_trace,
                                          std::abs(trace(0, j, -1, j, c)),
                                          std::abs(trace(g.nx - 1, j, g.nx, j, c))});
            out.extrapolated_trace = std::max(
                {out.extrapolated_trace,
                 std::abs(extrap(R.at(0, j, c), R.at(1, j, c), R.at(2, j, c))),
                 std::abs(extrap(R.at(g.nx - 1, j, c), R.at(g.nx - 2, j, c), R.at(g.nx - 3, j, c)))});
        }
        for (int i = 0; i < g.nx; ++i) {
            out.closure_trace = std::max({out.closure_trace,
                                          std::abs(trace(i, 0, i, -1, c)),
                                          std::abs(trace(i, g.ny - 1, i, g.ny, c))});
            out.extrapolated_trace = std::max(
                {out.extrapolated_trace,
                 std::abs(extrap(R.at(i, 0, c), R.at(i, 1, c), R.at(i, 2, c))),
                 std::abs(extrap(R.at(i, g.ny - 1, c), R.at(i, g.ny - 2, c), R.at(i, g.ny - 3, c)))});
        }
    }
    return out;
}

void advance(State& s, double t_end, const SchemeConfig& cfg, const StepCallback& cb) {
    cfg.validate();
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
    while (s.t < t_end - tiny) {
        double dt_try = std::min(cfg.dt, t_end - s.t);
        int halvings = 0;
        for (;;) {
            SchemeConfig step_cfg = cfg;
            step_cfg.dt = dt_try;
            try {
                PicardResult r = picard_step(s, step_cfg);
                s = std::move(r.state);
                if (cb) cb(s, r.report, dt_try);
                break;
            } catch (const StepRejected& e) {
                if (++halvings > 5)
                    throw RunFailure("step rejected after 5 dt halvings (residual " +
                                     std::to_string(e.residual) + ")");
                dt_try *= 0.5;
            }
        }
    }
}

}  // namespace qflow
