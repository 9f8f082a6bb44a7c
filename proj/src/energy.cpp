#include "qflow/energy.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace qflow {

double kinetic_energy(const VelocityField& u) { return 0.5 * dot_mac(u, u); }

double free_energy(const QField& Q, const MaterialParams& p) {
    const QField lap = laplacian_q(Q);
    double elastic = -0.5 * p.lambda * dot_q(lap, Q);
    double bulk = 0.0;
    for (int j = 0; j < Q.g.ny; ++j)
        for (int i = 0; i < Q.g.nx; ++i) bulk += bulk_energy_fB(Q.qten(i, j), p);
    return elastic + bulk * Q.g.cell_area();
}

static double h_norm2(const QField& Q, const MaterialParams& p) {
    const QField lap = laplacian_q(Q);
    double s = 0.0;
    for (int j = 0; j < Q.g.ny; ++j)
        for (int i = 0; i < Q.g.nx; ++i) {
            const Mat H = molecular_H(Q.qten(i, j), lap.qten(i, j), p);
            s += frob_dot(H, H);
        }
    return s * Q.g.cell_area();
}

double dissipation_exact(const VelocityField& u, const QField& Q, const MaterialParams& p,
                         const ViscositySpec& visc) {
    const ViscousOp op(Q, visc, 0.0);
    return op.dissipation(u) + p.gamma * h_norm2(Q, p);
}

double dissipation_B(const VelocityField& u, const QField& Q, const MaterialParams& p) {
    const MatField gu = gradu_center(u);
    return dot_mat(gu, gu) + p.gamma * h_norm2(Q, p);
}

void EnergyLedger::record(const State& s, const MaterialParams& p, const ViscositySpec& visc,
                          int picard_iters, double rho) {
    EnergyRecord r;
    r.t = s.t;
    r.kinetic = kinetic_energy(s.u);
    r.free_en = free_energy(s.Q, p);
    r.total = r.kinetic + r.free_en;
    r.B = dissipation_exact(s.u, s.Q, p, visc);
    r.max_div = max_abs_div(s.u);
    r.bdry_lapq = boundary_lapq(s.Q).closure_trace;
    r.picard_iters = picard_iters;
    r.rho = rho;
    if (rows.empty()) {
        r.cumB = 0.0;
    } else {
        const EnergyRecord& prev = rows.back();
        r.cumB = prev.cumB + 0.5 * (r.t - prev.t) * (prev.B + r.B);
    }
    r.residual = r.total + r.cumB - (rows.empty() ? r.total : E0());
    rows.push_back(r);
}

void EnergyLedger::write_csv(std::ostream& os) const {
    os << "t,kinetic,free_energy,total,B,cumB,residual\n";
    os << std::setprecision(17);
    for (const EnergyRecord& r : rows)
        os << r.t << ',' << r.kinetic << ',' << r.free_en << ',' << r.total << ',' << r.B
           << ',' << r.cumB << ',' << r.residual << '\n';
}

void EnergyLedger::write_csv_file(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_csv(f);
}

AuditReport dissipation_audit(const EnergyLedger& led, double tol_audit) {
    AuditReport rep;
    rep.tol = tol_audit;
    if (led.rows.size() < 2) return rep;
    const double scale = tol_audit * (1.0 + std::abs(led.E0()));
    rep.max_signed_residual = led.rows.front().residual;
    rep.monotone = true;
    for (size_t k = 1; k < led.rows.size(); ++k) {
        const EnergyRecord& a = led.rows[k - 1];
        const EnergyRecord& b = led.rows[k];
        rep.max_signed_residual = std::max(rep.max_signed_residual, b.residual);
        const double inc = b.total - a.total;
        rep.worst_step_increase = std::max(rep.worst_step_increase, inc);
        if (inc > tol_audit * (b.t - a.t)) rep.monotone = false;
    }
    rep.final_abs_residual = std::abs(led.rows.back().residual);
    rep.pass = rep.monotone && rep.max_signed_residual <= scale;
    return rep;
}

DiagnosticNorms diagnostic_norms(const State& s, const MaterialParams& p) {
    DiagnosticNorms n;
    n.u_l2 = norm_mac(s.u);
    const MatField gu = gradu_center(s.u);
    n.u_h1 = std::sqrt(dot_mat(gu, gu));
    n.q_l2 = norm_q(s.Q);
    auto [dx, dy] = grad_q(s.Q);
    n.q_h1 = std::sqrt(dot_q(dx, dx) + dot_q(dy, dy));
    n.q_h2 = norm_q(laplacian_q(s.Q));
    n.B = dissipation_B(s.u, s.Q, p);
    return n;
}

}  // namespace qflow
