#include "qflow/solve.hpp"

#include <cmath>
#include <functional>

#include "qflow/parallel.hpp"

namespace qflow {

namespace {

int wrap_i(int i, int n) { return ((i % n) + n) % n; }

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

void remove_mean(std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m += x;
    m /= a.size();
    for (double& x : a) x -= m;
}

// Plain preconditioned CG on vectors. apply() must be SPD (or SPD on the
// zero-mean subspace when zero_mean is set).
SolveStats cg_solve(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                    const std::vector<double>& b, std::vector<double>& x,
                    const std::vector<double>* diag, double tol, int max_iter, bool zero_mean) {
    const size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), Ap(n);
    apply(x, Ap);
    for (size_t k = 0; k < n; ++k) r[k] = b[k] - Ap[k];
    if (zero_mean) remove_mean(r);
    const double bnorm = std::sqrt(vdot(b, b));
    const double stop = tol * (bnorm > 0.0 ? bnorm : 1.0);
    SolveStats st;
    st.initial_residual = std::sqrt(vdot(r, r));
    double rnorm = st.initial_residual;
    if (rnorm <= stop) {
        st.final_residual = rnorm;
        return st;
    }
    auto precond = [&](const std::vector<double>& rin, std::vector<double>& zout) {
        if (diag)
            for (size_t k = 0; k < n; ++k) zout[k] = rin[k] / (*diag)[k];
        else
            zout = rin;
        if (zero_mean) remove_mean(zout);
    };
    precond(r, z);
    p = z;
    double rz = vdot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        apply(p, Ap);
        const double alpha = rz / vdot(p, Ap);
        for (size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        if (zero_mean) remove_mean(r);
        rnorm = std::sqrt(vdot(r, r));
        st.iterations = it;
        if (rnorm <= stop) {
            st.final_residual = rnorm;
            if (zero_mean) remove_mean(x);
            return st;
        }
        precond(r, z);
        const double rz_new = vdot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    throw SolverError("CG failed to converge (residual " + std::to_string(rnorm) + ")",
                      rnorm, max_iter);
}

void lap_apply_neg(const std::vector<double>& in, std::vector<double>& out,
                   const GridSpec& g, Closure cl) {
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    parallel_for(g.ny, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double c = in[cid(g, i, j)];
                out[cid(g, i, j)] =
                    -((cc_get(in, g, i - 1, j, cl) - 2.0 * c + cc_get(in, g, i + 1, j, cl)) * ix2 +
                      (cc_get(in, g, i, j - 1, cl) - 2.0 * c + cc_get(in, g, i, j + 1, cl)) * iy2);
            }
    });
}

std::vector<double> poisson_diag(const GridSpec& g, Closure cl) {
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    std::vector<double> d((size_t)g.cells(), 2.0 * (ix2 + iy2));
    if (cl == Closure::wrap) return d;
    const double adj = (cl == Closure::odd) ? 1.0 : -1.0;  // odd ghost adds, copy cancels
    for (int j = 0; j < g.ny; ++j) {
        d[cid(g, 0, j)] += adj * ix2;
        d[cid(g, g.nx - 1, j)] += adj * ix2;
    }
    for (int i = 0; i < g.nx; ++i) {
        d[cid(g, i, 0)] += adj * iy2;
        d[cid(g, i, g.ny - 1)] += adj * iy2;
    }
    return d;
}

}  // namespace

ScalarField solve_poisson(const ScalarField& rhs, const SolverConfig& cfg, Closure cl,
                          SolveStats* stats) {
    const GridSpec& g = rhs.g;
    const bool singular = (cl != Closure::odd);
    std::vector<double> b = rhs.a;
    if (singular) {
        double m = 0.0, amax = 0.0;
        for (double x : b) {
            m += x;
            amax = std::max(amax, std::abs(x));
        }
        m /= b.size();
        if (std::abs(m) > 1e-10 * (1.0 + amax))
            throw std::invalid_argument("poisson rhs must have zero mean under this closure");
        for (double& x : b) x -= m;
    }
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        lap_apply_neg(in, out, g, cl);
    };
    std::vector<double> diag;
    if (cfg.pc == SolverConfig::Pc::jacobi) diag = poisson_diag(g, cl);
    ScalarField x(g);
    SolveStats st = cg_solve(apply, b, x.a, diag.empty() ? nullptr : &diag, cfg.tol,
                             cfg.effective_max_iter(g), singular);
    if (stats) *stats = st;
    return x;
}

ProjectionResult helmholtz_project(const VelocityField& v, const SolverConfig& cfg) {
    const GridSpec& g = v.g;
    const Closure cl = g.bc == Bc::periodic ? Closure::wrap : Closure::copy;
    // -lap q = -div v, so that v = P v + grad q with div P v = 0
    ScalarField rhs = div_mac(v);
    for (double& x : rhs.a) x = -x;
    ProjectionResult res;
    res.q = solve_poisson(rhs, cfg, cl, &res.stats);
    const VelocityField gq = grad_to_faces(res.q, cl);
    res.vel = v;
    for (size_t k = 0; k < res.vel.u.size(); ++k) res.vel.u[k] -= gq.u[k];
    for (size_t k = 0; k < res.vel.v.size(); ++k) res.vel.v[k] -= gq.v[k];
    if (g.bc == Bc::dirichlet0) res.vel.zero_normal_boundary();
    return res;
}

// ---------------------------------------------------------------------------
// viscous operator

ViscousOp::ViscousOp(const QField& Q_tilde, const ViscositySpec& visc, double dt_) {
    g = Q_tilde.g;
    dt = dt_;
    nu_cell.assign((size_t)g.cells(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            nu_cell[cid(g, i, j)] = viscosity_nu(Q_tilde.qten(i, j), visc);
    nu_node.assign((size_t)(g.nx + 1) * (g.ny + 1), 0.0);
    const bool per = g.bc == Bc::periodic;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            double s = 0.0;
            int cnt = 0;
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    int ci = i + di, cj = j + dj;
                    if (per) { ci = wrap_i(ci, g.nx); cj = wrap_i(cj, g.ny); }
                    else if (ci < 0 || ci >= g.nx || cj < 0 || cj >= g.ny) continue;
                    s += nu_cell[cid(g, ci, cj)];
                    ++cnt;
                }
            nu_node[(size_t)j * (g.nx + 1) + i] = s / cnt;
        }
}

namespace {

// face reads/writes with tangential ghost fold (wall value zero) or wrap
double fuget(const std::vector<double>& u, const GridSpec& g, int i, int j) {
    if (g.bc == Bc::periodic) return u[uid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))];
    double s = 1.0;
    if (j < 0) { j = -1 - j; s = -s; }
    else if (j >= g.ny) { j = 2 * g.ny - 1 - j; s = -s; }
    return s * u[uid(g, i, j)];
}

double fvget(const std::vector<double>& v, const GridSpec& g, int i, int j) {
    if (g.bc == Bc::periodic) return v[vid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))];
    double s = 1.0;
    if (i < 0) { i = -1 - i; s = -s; }
    else if (i >= g.nx) { i = 2 * g.nx - 1 - i; s = -s; }
    return s * v[vid(g, i, j)];
}

void fuadd(std::vector<double>& u, const GridSpec& g, int i, int j, double val) {
    if (g.bc == Bc::periodic) { u[uid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))] += val; return; }
    double s = 1.0;
    if (j < 0) { j = -1 - j; s = -s; }
    else if (j >= g.ny) { j = 2 * g.ny - 1 - j; s = -s; }
    u[uid(g, i, j)] += s * val;
}

void fvadd(std::vector<double>& v, const GridSpec& g, int i, int j, double val) {
    if (g.bc == Bc::periodic) { v[vid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))] += val; return; }
    double s = 1.0;
    if (i < 0) { i = -1 - i; s = -s; }
    else if (i >= g.nx) { i = 2 * g.nx - 1 - i; s = -s; }
    v[vid(g, i, j)] += s * val;
}

void zero_pinned(std::vector<double>& u, std::vector<double>& v, const GridSpec& g) {
    if (g.bc == Bc::periodic) {
        // canonical DOFs exclude the duplicate faces at i = nx and j = ny
        for (int j = 0; j < g.ny; ++j) u[uid(g, g.nx, j)] = 0.0;
        for (int i = 0; i < g.nx; ++i) v[vid(g, i, g.ny)] = 0.0;
        return;
    }
    for (int j = 0; j < g.ny; ++j) u[uid(g, 0, j)] = u[uid(g, g.nx, j)] = 0.0;
    for (int i = 0; i < g.nx; ++i) v[vid(g, i, 0)] = v[vid(g, i, g.ny)] = 0.0;
}

struct StrainEval {
    std::vector<double> d11, d22;  // cells
    std::vector<double> d12;       // nodes
};

// Node quadrature weight: boundary nodes own half a cell per wall direction
// (quarter at corners). With these weights the form-exact transpose operator
// reproduces the consistent one-sided wall-shear stencil.
double node_weight(const GridSpec& g, int i, int j) {
    if (g.bc == Bc::periodic) return 1.0;
    double w = 1.0;
    if (i == 0 || i == g.nx) w *= 0.5;
    if (j == 0 || j == g.ny) w *= 0.5;
    return w;
}

StrainEval strain(const std::vector<double>& u, const std::vector<double>& v, const GridSpec& g) {
    StrainEval s;
    s.d11.resize((size_t)g.cells());
    s.d22.resize((size_t)g.cells());
    s.d12.resize((size_t)(g.nx + 1) * (g.ny + 1));
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    parallel_for(g.ny, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < g.nx; ++i) {
                s.d11[cid(g, i, j)] = (fuget(u, g, i + 1, j) - fuget(u, g, i, j)) * ihx;
                s.d22[cid(g, i, j)] = (fvget(v, g, i, j + 1) - fvget(v, g, i, j)) * ihy;
            }
    });
    parallel_for(g.ny + 1, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i <= g.nx; ++i)
                s.d12[(size_t)j * (g.nx + 1) + i] =
                    0.5 * ((fuget(u, g, i, j) - fuget(u, g, i, j - 1)) * ihy +
                           (fvget(v, g, i, j) - fvget(v, g, i - 1, j)) * ihx);
    });
    return s;
}

}  // namespace

void ViscousOp::apply(const std::vector<double>& in_u, const std::vector<double>& in_v,
                      std::vector<double>& out_u, std::vector<double>& out_v) const {
    const StrainEval s = strain(in_u, in_v, g);
    std::vector<double> au(in_u.size(), 0.0), av(in_v.size(), 0.0);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    // scatter the stress back through the exact transpose of the strain map
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double t11 = nu_cell[cid(g, i, j)] * s.d11[cid(g, i, j)];
            const double t22 = nu_cell[cid(g, i, j)] * s.d22[cid(g, i, j)];
            fuadd(au, g, i + 1, j, t11 * ihx);
            fuadd(au, g, i, j, -t11 * ihx);
            fvadd(av, g, i, j + 1, t22 * ihy);
            fvadd(av, g, i, j, -t22 * ihy);
        }
    const int nj = g.bc == Bc::periodic ? g.ny - 1 : g.ny;
    const int ni = g.bc == Bc::periodic ? g.nx - 1 : g.nx;
    for (int j = 0; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i) {
            const double t12 = 2.0 * node_weight(g, i, j) *
                               nu_node[(size_t)j * (g.nx + 1) + i] *
                               s.d12[(size_t)j * (g.nx + 1) + i];
            fuadd(au, g, i, j, 0.5 * t12 * ihy);
            fuadd(au, g, i, j - 1, -0.5 * t12 * ihy);
            fvadd(av, g, i, j, 0.5 * t12 * ihx);
            fvadd(av, g, i - 1, j, -0.5 * t12 * ihx);
        }
    // au = A u with A = -div(nu D), positive semidefinite by construction
    for (size_t k = 0; k < in_u.size(); ++k) out_u[k] = in_u[k] + dt * au[k];
    for (size_t k = 0; k < in_v.size(); ++k) out_v[k] = in_v[k] + dt * av[k];
    zero_pinned(out_u, out_v, g);
}

double ViscousOp::dissipation(const VelocityField& u) const {
    const StrainEval s = strain(u.u, u.v, g);
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            acc += nu_cell[cid(g, i, j)] *
                   (s.d11[cid(g, i, j)] * s.d11[cid(g, i, j)] +
                    s.d22[cid(g, i, j)] * s.d22[cid(g, i, j)]);
    const int nj = g.bc == Bc::periodic ? g.ny - 1 : g.ny;
    const int ni = g.bc == Bc::periodic ? g.nx - 1 : g.nx;
    for (int j = 0; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i) {
            const double d = s.d12[(size_t)j * (g.nx + 1) + i];
            acc += 2.0 * node_weight(g, i, j) * nu_node[(size_t)j * (g.nx + 1) + i] * d * d;
        }
    return acc * g.cell_area();
}

std::vector<double> ViscousOp::jacobi_diag() const {
    const size_t nu = (size_t)(g.nx + 1) * g.ny, nv = (size_t)g.nx * (g.ny + 1);
    std::vector<double> du(nu, 0.0), dv(nv, 0.0);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const bool per = g.bc == Bc::periodic;
    auto utarget = [&](int i, int j, double& sign) {
        sign = 1.0;
        if (per) return uid(g, wrap_i(i, g.nx), wrap_i(j, g.ny));
        if (j < 0) { j = -1 - j; sign = -1.0; }
        else if (j >= g.ny) { j = 2 * g.ny - 1 - j; sign = -1.0; }
        return uid(g, i, j);
    };
    auto vtarget = [&](int i, int j, double& sign) {
        sign = 1.0;
        if (per) return vid(g, wrap_i(i, g.nx), wrap_i(j, g.ny));
        if (i < 0) { i = -1 - i; sign = -1.0; }
        else if (i >= g.nx) { i = 2 * g.nx - 1 - i; sign = -1.0; }
        return vid(g, i, j);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double nu_c = nu_cell[cid(g, i, j)];
            du[uid(g, i + 1, j)] += nu_c * ihx * ihx;
            du[uid(g, i, j)] += nu_c * ihx * ihx;
            dv[vid(g, i, j + 1)] += nu_c * ihy * ihy;
            dv[vid(g, i, j)] += nu_c * ihy * ihy;
        }
    const int nj = per ? g.ny - 1 : g.ny;
    const int ni = per ? g.nx - 1 : g.nx;
    for (int j = 0; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i) {
            const double w = 2.0 * node_weight(g, i, j) * nu_node[(size_t)j * (g.nx + 1) + i];
            double s1, s2;
            const int ku1 = utarget(i, j, s1), ku2 = utarget(i, j - 1, s2);
            const double cu1 = 0.5 * ihy * s1, cu2 = -0.5 * ihy * s2;
            if (ku1 == ku2) du[ku1] += w * (cu1 + cu2) * (cu1 + cu2);
            else { du[ku1] += w * cu1 * cu1; du[ku2] += w * cu2 * cu2; }
            const int kv1 = vtarget(i, j, s1), kv2 = vtarget(i - 1, j, s2);
            const double cv1 = 0.5 * ihx * s1, cv2 = -0.5 * ihx * s2;
            if (kv1 == kv2) dv[kv1] += w * (cv1 + cv2) * (cv1 + cv2);
            else { dv[kv1] += w * cv1 * cv1; dv[kv2] += w * cv2 * cv2; }
        }
    std::vector<double> diag(nu + nv);
    for (size_t k = 0; k < nu; ++k) diag[k] = 1.0 + dt * du[k];
    for (size_t k = 0; k < nv; ++k) diag[nu + k] = 1.0 + dt * dv[k];
    return diag;
}

MomentumResult momentum_solve(const VelocityField& u_old, const VelocityField& forces,
                              const QField& Q_tilde, const ViscositySpec& visc, double dt,
                              const SolverConfig& cfg) {
    const GridSpec& g = u_old.g;
    const ViscousOp op(Q_tilde, visc, dt);
    const size_t nu = u_old.u.size(), nv = u_old.v.size();
    std::vector<double> b(nu + nv), x(nu + nv, 0.0);
    {
        std::vector<double> bu = u_old.u, bv = u_old.v;
        for (size_t k = 0; k < nu; ++k) bu[k] += dt * forces.u[k];
        for (size_t k = 0; k < nv; ++k) bv[k] += dt * forces.v[k];
        zero_pinned(bu, bv, g);
        std::copy(bu.begin(), bu.end(), b.begin());
        std::copy(bv.begin(), bv.end(), b.begin() + nu);
    }
    std::vector<double> tu(nu), tv(nv), ou(nu), ov(nv);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        std::copy(in.begin(), in.begin() + nu, tu.begin());
        std::copy(in.begin() + nu, in.end(), tv.begin());
        op.apply(tu, tv, ou, ov);
        std::copy(ou.begin(), ou.end(), out.begin());
        std::copy(ov.begin(), ov.end(), out.begin() + nu);
    };
    std::vector<double> diag;
    if (cfg.pc == SolverConfig::Pc::jacobi) diag = op.jacobi_diag();
    MomentumResult res;
    res.visc = cg_solve(apply, b, x, diag.empty() ? nullptr : &diag, cfg.tol,
                        cfg.effective_max_iter(g), false);
    VelocityField ustar(g);
    std::copy(x.begin(), x.begin() + nu, ustar.u.begin());
    std::copy(x.begin() + nu, x.end(), ustar.v.begin());
    ProjectionResult pr = helmholtz_project(ustar, cfg);
    res.vel = std::move(pr.vel);
    res.q = std::move(pr.q);
    res.proj = pr.stats;
    return res;
}

QField solve_q_implicit(const QField& rhs, double dt, double eps, double gl,
                        const SolverConfig& cfg, SolveStats* stats) {
    const GridSpec& g = rhs.g;
    const Closure cl = default_closure(g);
    const size_t n = (size_t)g.cells();
    std::vector<double> lap1(n), lap2(n);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        lap_apply_neg(in, lap1, g, cl);  // lap1 = -lap in
        if (eps > 0.0) {
            for (size_t k = 0; k < n; ++k) lap2[k] = -lap1[k];
            lap_apply_neg(lap2, out, g, cl);  // out = -lap(lap in), walls close lap in at zero
            for (size_t k = 0; k < n; ++k)
                out[k] = in[k] + dt * (-eps * out[k] + gl * lap1[k]);
        } else {
            for (size_t k = 0; k < n; ++k) out[k] = in[k] + dt * gl * lap1[k];
        }
    };
    SolveStats agg;
    QField x(g, rhs.d);
    std::vector<double> b(n), xc(n);
    for (int c = 0; c < rhs.nc(); ++c) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) b[cid(g, i, j)] = rhs.at(i, j, c);
        std::fill(xc.begin(), xc.end(), 0.0);
        SolveStats st = cg_solve(apply, b, xc, nullptr, cfg.tol, cfg.effective_max_iter(g), false);
        agg.iterations = std::max(agg.iterations, st.iterations);
        agg.initial_residual = std::max(agg.initial_residual, st.initial_residual);
        agg.final_residual = std::max(agg.final_residual, st.final_residual);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) x.at(i, j, c) = xc[cid(g, i, j)];
    }
    if (stats) *stats = agg;
    return x;
}

}  // namespace qflow
