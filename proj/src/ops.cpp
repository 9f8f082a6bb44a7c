#include "qflow/ops.hpp"

#include <cmath>
#include <stdexcept>

#include "qflow/parallel.hpp"

namespace qflow {

void GridSpec::validate() const {
    if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs nx, ny >= 4");
    if (lx <= 0.0 || ly <= 0.0) throw std::invalid_argument("grid extents must be positive");
}

void VelocityField::zero_normal_boundary() {
    if (g.bc != Bc::dirichlet0) return;
    for (int j = 0; j < g.ny; ++j) uat(0, j) = uat(g.nx, j) = 0.0;
    for (int i = 0; i < g.nx; ++i) vat(i, 0) = vat(i, g.ny) = 0.0;
}

Closure default_closure(const GridSpec& g) {
    return g.bc == Bc::periodic ? Closure::wrap : Closure::odd;
}

static int wrap_i(int i, int n) { return ((i % n) + n) % n; }

double cc_get(const std::vector<double>& a, const GridSpec& g, int i, int j,
              Closure cl, int stride, int comp) {
    if (cl == Closure::wrap) {
        i = wrap_i(i, g.nx);
        j = wrap_i(j, g.ny);
        return a[(size_t)cid(g, i, j) * stride + comp];
    }
    double s = 1.0;
    if (i < 0) { i = -1 - i; if (cl == Closure::odd) s = -s; }
    else if (i >= g.nx) { i = 2 * g.nx - 1 - i; if (cl == Closure::odd) s = -s; }
    if (j < 0) { j = -1 - j; if (cl == Closure::odd) s = -s; }
    else if (j >= g.ny) { j = 2 * g.ny - 1 - j; if (cl == Closure::odd) s = -s; }
    return s * a[(size_t)cid(g, i, j) * stride + comp];
}

// face accessors with tangential ghost closure (walls carry u = 0)
static double uget(const VelocityField& f, int i, int j) {
    const GridSpec& g = f.g;
    if (g.bc == Bc::periodic)
        return f.u[uid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))];
    double s = 1.0;
    if (j < 0) { j = -1 - j; s = -s; }
    else if (j >= g.ny) { j = 2 * g.ny - 1 - j; s = -s; }
    return s * f.u[uid(g, i, j)];
}

static double vget(const VelocityField& f, int i, int j) {
    const GridSpec& g = f.g;
    if (g.bc == Bc::periodic)
        return f.v[vid(g, wrap_i(i, g.nx), wrap_i(j, g.ny))];
    double s = 1.0;
    if (i < 0) { i = -1 - i; s = -s; }
    else if (i >= g.nx) { i = 2 * g.nx - 1 - i; s = -s; }
    return s * f.v[vid(g, i, j)];
}

static void lap_component(const std::vector<double>& in, std::vector<double>& out,
                          const GridSpec& g, Closure cl, int stride, int comp) {
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    parallel_for(g.ny, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double c = in[(size_t)cid(g, i, j) * stride + comp];
                out[(size_t)cid(g, i, j) * stride + comp] =
                    (cc_get(in, g, i - 1, j, cl, stride, comp) - 2.0 * c +
                     cc_get(in, g, i + 1, j, cl, stride, comp)) * ix2 +
                    (cc_get(in, g, i, j - 1, cl, stride, comp) - 2.0 * c +
                     cc_get(in, g, i, j + 1, cl, stride, comp)) * iy2;
            }
    });
}

ScalarField laplacian_scalar(const ScalarField& f, Closure cl) {
    ScalarField out(f.g);
    lap_component(f.a, out.a, f.g, cl, 1, 0);
    return out;
}

QField laplacian_q(const QField& Q) {
    QField out(Q.g, Q.d);
    const Closure cl = default_closure(Q.g);
    for (int c = 0; c < Q.nc(); ++c) lap_component(Q.a, out.a, Q.g, cl, Q.nc(), c);
    return out;
}

QField biharmonic_q(const QField& Q) {
    return laplacian_q(laplacian_q(Q));
}

std::pair<QField, QField> grad_q(const QField& Q) {
    QField dx(Q.g, Q.d), dy(Q.g, Q.d);
    const Closure cl = default_closure(Q.g);
    const GridSpec& g = Q.g;
    const double i2hx = 0.5 / g.hx(), i2hy = 0.5 / g.hy();
    for (int c = 0; c < Q.nc(); ++c)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                dx.at(i, j, c) = (cc_get(Q.a, g, i + 1, j, cl, Q.nc(), c) -
                                  cc_get(Q.a, g, i - 1, j, cl, Q.nc(), c)) * i2hx;
                dy.at(i, j, c) = (cc_get(Q.a, g, i, j + 1, cl, Q.nc(), c) -
                                  cc_get(Q.a, g, i, j - 1, cl, Q.nc(), c)) * i2hy;
            }
    return {dx, dy};
}

VecField grad_scalar(const ScalarField& f, Closure cl) {
    VecField out(f.g);
    const GridSpec& g = f.g;
    const double i2hx = 0.5 / g.hx(), i2hy = 0.5 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.x[cid(g, i, j)] = (cc_get(f.a, g, i + 1, j, cl) - cc_get(f.a, g, i - 1, j, cl)) * i2hx;
            out.y[cid(g, i, j)] = (cc_get(f.a, g, i, j + 1, cl) - cc_get(f.a, g, i, j - 1, cl)) * i2hy;
        }
    return out;
}

std::pair<VecField, VecField> grad_vec(const VecField& w, Closure cl) {
    VecField ddx(w.g), ddy(w.g);
    const GridSpec& g = w.g;
    const double i2hx = 0.5 / g.hx(), i2hy = 0.5 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            ddx.x[cid(g, i, j)] = (cc_get(w.x, g, i + 1, j, cl) - cc_get(w.x, g, i - 1, j, cl)) * i2hx;
            ddx.y[cid(g, i, j)] = (cc_get(w.y, g, i + 1, j, cl) - cc_get(w.y, g, i - 1, j, cl)) * i2hx;
            ddy.x[cid(g, i, j)] = (cc_get(w.x, g, i, j + 1, cl) - cc_get(w.x, g, i, j - 1, cl)) * i2hy;
            ddy.y[cid(g, i, j)] = (cc_get(w.y, g, i, j + 1, cl) - cc_get(w.y, g, i, j - 1, cl)) * i2hy;
        }
    return {ddx, ddy};
}

double qdot(const QTensor& A, const QTensor& B) {
    if (A.d == 2) return 2.0 * (A.q[0] * B.q[0] + A.q[1] * B.q[1]);
    const double az = A.q[0] + A.q[3], bz = B.q[0] + B.q[3];
    return A.q[0] * B.q[0] + A.q[3] * B.q[3] + az * bz +
           2.0 * (A.q[1] * B.q[1] + A.q[2] * B.q[2] + A.q[4] * B.q[4]);
}

MatField ericksen_tau(const QField& Q, double lambda) {
    auto [dx, dy] = grad_q(Q);
    MatField tau(Q.g, 2);
    const GridSpec& g = Q.g;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const QTensor qx = dx.qten(i, j), qy = dy.qten(i, j);
            tau.at(i, j, 0, 0) = -lambda * qdot(qx, qx);
            tau.at(i, j, 0, 1) = -lambda * qdot(qx, qy);
            tau.at(i, j, 1, 0) = -lambda * qdot(qy, qx);
            tau.at(i, j, 1, 1) = -lambda * qdot(qy, qy);
        }
    return tau;
}

VecField velocity_at_centers(const VelocityField& vel) {
    VecField out(vel.g);
    const GridSpec& g = vel.g;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.x[cid(g, i, j)] = 0.5 * (uget(vel, i, j) + uget(vel, i + 1, j));
            out.y[cid(g, i, j)] = 0.5 * (vget(vel, i, j) + vget(vel, i, j + 1));
        }
    return out;
}

QField convect_q(const VelocityField& vel, const QField& Q) {
    auto [dx, dy] = grad_q(Q);
    const VecField uc = velocity_at_centers(vel);
    QField out(Q.g, Q.d);
    const GridSpec& g = Q.g;
    for (int c = 0; c < Q.nc(); ++c)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                out.at(i, j, c) = uc.x[cid(g, i, j)] * dx.at(i, j, c) +
                                  uc.y[cid(g, i, j)] * dy.at(i, j, c);
    return out;
}

VelocityField convect_u(const VelocityField& vel) {
    const GridSpec& g = vel.g;
    VelocityField out(g);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    // products at centers and nodes
    std::vector<double> uu((size_t)g.cells()), vv((size_t)g.cells());
    std::vector<double> uvn((size_t)(g.nx + 1) * (g.ny + 1));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double um = 0.5 * (uget(vel, i, j) + uget(vel, i + 1, j));
            const double vm = 0.5 * (vget(vel, i, j) + vget(vel, i, j + 1));
            uu[cid(g, i, j)] = um * um;
            vv[cid(g, i, j)] = vm * vm;
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double un = 0.5 * (uget(vel, i, j) + uget(vel, i, j - 1));
            const double vn = 0.5 * (vget(vel, i, j) + vget(vel, i - 1, j));
            uvn[(size_t)j * (g.nx + 1) + i] = un * vn;
        }
    auto ccw = [&](const std::vector<double>& a, int i, int j) {
        return cc_get(a, g, i, j, g.bc == Bc::periodic ? Closure::wrap : Closure::copy);
    };
    const int iu0 = g.bc == Bc::periodic ? 0 : 1;
    const int iu1 = g.bc == Bc::periodic ? g.nx - 1 : g.nx - 1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = iu0; i <= iu1; ++i)
            out.uat(i, j) = (ccw(uu, i, j) - ccw(uu, i - 1, j)) * ihx +
                            (uvn[(size_t)(j + 1) * (g.nx + 1) + i] -
                             uvn[(size_t)j * (g.nx + 1) + i]) * ihy;
    const int jv0 = g.bc == Bc::periodic ? 0 : 1;
    const int jv1 = g.bc == Bc::periodic ? g.ny - 1 : g.ny - 1;
    for (int j = jv0; j <= jv1; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vat(i, j) = (ccw(vv, i, j) - ccw(vv, i, j - 1)) * ihy +
                            (uvn[(size_t)j * (g.nx + 1) + i + 1] -
                             uvn[(size_t)j * (g.nx + 1) + i]) * ihx;
    return out;
}

VecField div_matrix(const MatField& F, Closure cl) {
    VecField out(F.g);
    const GridSpec& g = F.g;
    const int m = F.m, s = m * m;
    const double i2hx = 0.5 / g.hx(), i2hy = 0.5 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.x[cid(g, i, j)] =
                (cc_get(F.a, g, i + 1, j, cl, s, 0) - cc_get(F.a, g, i - 1, j, cl, s, 0)) * i2hx +
                (cc_get(F.a, g, i, j + 1, cl, s, 1) - cc_get(F.a, g, i, j - 1, cl, s, 1)) * i2hy;
            out.y[cid(g, i, j)] =
                (cc_get(F.a, g, i + 1, j, cl, s, m) - cc_get(F.a, g, i - 1, j, cl, s, m)) * i2hx +
                (cc_get(F.a, g, i, j + 1, cl, s, m + 1) - cc_get(F.a, g, i, j - 1, cl, s, m + 1)) * i2hy;
        }
    return out;
}

ScalarField div_mac(const VelocityField& vel) {
    const GridSpec& g = vel.g;
    ScalarField out(g);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = (uget(vel, i + 1, j) - uget(vel, i, j)) * ihx +
                           (vget(vel, i, j + 1) - vget(vel, i, j)) * ihy;
    return out;
}

VelocityField grad_to_faces(const ScalarField& p, Closure cl) {
    const GridSpec& g = p.g;
    VelocityField out(g);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const bool per = g.bc == Bc::periodic;
    const int iu0 = per ? 0 : 1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = iu0; i <= g.nx - 1; ++i)
            out.uat(i, j) = (p.at(i, j) - cc_get(p.a, g, i - 1, j, cl)) * ihx;
    const int jv0 = per ? 0 : 1;
    for (int j = jv0; j <= g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vat(i, j) = (p.at(i, j) - cc_get(p.a, g, i, j - 1, cl)) * ihy;
    return out;
}

VelocityField div_stress_faces(const MatField& F) {
    const GridSpec& g = F.g;
    VelocityField out(g);
    const int m = F.m, s = m * m;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const bool per = g.bc == Bc::periodic;
    // off-diagonal components averaged to nodes
    std::vector<double> f01n((size_t)(g.nx + 1) * (g.ny + 1), 0.0), f10n(f01n);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            double s01 = 0.0, s10 = 0.0;
            int cnt = 0;
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    int ci = i + di, cj = j + dj;
                    if (per) { ci = wrap_i(ci, g.nx); cj = wrap_i(cj, g.ny); }
                    else if (ci < 0 || ci >= g.nx || cj < 0 || cj >= g.ny) continue;
                    s01 += F.a[(size_t)cid(g, ci, cj) * s + 1];
                    s10 += F.a[(size_t)cid(g, ci, cj) * s + m];
                    ++cnt;
                }
            f01n[(size_t)j * (g.nx + 1) + i] = s01 / cnt;
            f10n[(size_t)j * (g.nx + 1) + i] = s10 / cnt;
        }
    auto fcc = [&](int i, int j, int comp) {
        return cc_get(F.a, g, i, j, per ? Closure::wrap : Closure::copy, s, comp);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = per ? 0 : 1; i <= g.nx - 1; ++i)
            out.uat(i, j) = (fcc(i, j, 0) - fcc(i - 1, j, 0)) * ihx +
                            (f01n[(size_t)(j + 1) * (g.nx + 1) + i] -
                             f01n[(size_t)j * (g.nx + 1) + i]) * ihy;
    for (int j = per ? 0 : 1; j <= g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vat(i, j) = (f10n[(size_t)j * (g.nx + 1) + i + 1] -
                             f10n[(size_t)j * (g.nx + 1) + i]) * ihx +
                            (fcc(i, j, m + 1) - fcc(i, j - 1, m + 1)) * ihy;
    return out;
}

MatField gradu_center(const VelocityField& vel) {
    const GridSpec& g = vel.g;
    MatField out(g, 2);
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const double i2hx = 0.5 * ihx, i2hy = 0.5 * ihy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.at(i, j, 0, 0) = (uget(vel, i + 1, j) - uget(vel, i, j)) * ihx;
            out.at(i, j, 1, 1) = (vget(vel, i, j + 1) - vget(vel, i, j)) * ihy;
            out.at(i, j, 0, 1) =  // du/dy
                0.5 * ((uget(vel, i, j + 1) - uget(vel, i, j - 1)) +
                       (uget(vel, i + 1, j + 1) - uget(vel, i + 1, j - 1))) * i2hy;
            out.at(i, j, 1, 0) =  // dv/dx
                0.5 * ((vget(vel, i + 1, j) - vget(vel, i - 1, j)) +
                       (vget(vel, i + 1, j + 1) - vget(vel, i - 1, j + 1))) * i2hx;
        }
    return out;
}

// grad u convention: (grad u)_ij = d_j u_i, so row 0 is (du/dx, du/dy).

double dot_cc(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.a.size(); ++k) s += a.a[k] * b.a[k];
    return s * a.g.cell_area();
}

double dot_cc(const VecField& a, const VecField& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.x.size(); ++k) s += a.x[k] * b.x[k] + a.y[k] * b.y[k];
    return s * a.g.cell_area();
}

double dot_q(const QField& A, const QField& B) {
    double s = 0.0;
    const GridSpec& g = A.g;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s += qdot(A.qten(i, j), B.qten(i, j));
    return s * g.cell_area();
}

double dot_mat(const MatField& A, const MatField& B) {
    double s = 0.0;
    for (size_t k = 0; k < A.a.size(); ++k) s += A.a[k] * B.a[k];
    return s * A.g.cell_area();
}

double dot_mac(const VelocityField& a, const VelocityField& b) {
    const GridSpec& g = a.g;
    const int iu = g.bc == Bc::periodic ? g.nx - 1 : g.nx;
    const int jv = g.bc == Bc::periodic ? g.ny - 1 : g.ny;
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= iu; ++i) s += a.uat(i, j) * b.uat(i, j);
    for (int j = 0; j <= jv; ++j)
        for (int i = 0; i < g.nx; ++i) s += a.vat(i, j) * b.vat(i, j);
    return s * g.cell_area();
}

double norm_cc(const ScalarField& a) { return std::sqrt(dot_cc(a, a)); }
double norm_q(const QField& A) { return std::sqrt(dot_q(A, A)); }
double norm_mac(const VelocityField& a) { return std::sqrt(dot_mac(a, a)); }

double max_abs_div(const VelocityField& vel) {
    const ScalarField d = div_mac(vel);
    double m = 0.0;
    for (double x : d.a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace qflow
