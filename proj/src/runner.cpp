#include "qflow/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "qflow/io.hpp"
#include "qflow/verify.hpp"

namespace qflow {

State build_initial_state(const RunConfig& rc) {
    if (rc.initial.kind == InitialSpec::Kind::file) {
        State s;
        try {
            s = read_state(rc.initial.path);
        } catch (const std::runtime_error& e) {
            throw ConfigError(std::string("initial.path: ") + e.what());
        }
        if (!s.Q.g.same_layout(rc.grid) || s.Q.g.lx != rc.grid.lx || s.Q.g.ly != rc.grid.ly)
            throw ConfigError("initial.path: snapshot grid does not match [grid]");
        if (s.Q.d != rc.d) throw ConfigError("initial.path: snapshot d does not match tensor.d");
        if (s.t >= rc.t_end)
            throw ConfigError("scheme.t_end must exceed the snapshot time for a restart");
        return s;
    }
    State s{0.0, VelocityField(rc.grid), QField(rc.grid, rc.d)};
    if (rc.initial.kind == InitialSpec::Kind::bubble)
        s.Q = uniaxial_bubble(rc.grid, rc.d, rc.initial.s, rc.initial.cx, rc.initial.cy,
                              rc.initial.radius, rc.initial.director);
    return s;
}

RunResult run_simulation(const RunConfig& rc, std::ostream& log) {
    namespace fs = std::filesystem;
    fs::create_directories(rc.out_dir);
    {
        std::ofstream echo(rc.out_dir + "/config.echo.toml");
        if (!echo) throw ConfigError("cannot write to run.out_dir '" + rc.out_dir + "'");
        echo_config(echo, rc);
    }

    State s = build_initial_state(rc);
    RunResult res;
    res.ledger.record(s, rc.scheme.mat, rc.scheme.visc);

    char buf[320];
    auto cb = [&](const State& st, const PicardReport& rep, double dt_used) {
        res.steps += 1;
        res.ledger.record(st, rc.scheme.mat, rc.scheme.visc, rep.iterations, rep.rho);
        if (res.steps % rc.log_every == 0) {
            const EnergyRecord& r = res.ledger.rows.back();
            std::snprintf(buf, sizeof buf,
                          "step %6d  t %12.6e  dt %10.4e  it %3d  rho %9.3e  E %.10e  "
                          "res %10.3e  div %9.3e",
                          res.steps, st.t, dt_used, rep.iterations, rep.rho, r.total,
                          r.residual, r.max_div);
            log << buf << '\n';
        }
        if (rc.snapshot_every > 0 && res.steps % rc.snapshot_every == 0) {
            std::snprintf(buf, sizeof buf, "%s/state_%06d.snap", rc.out_dir.c_str(), res.steps);
            write_state(buf, st);
        }
    };
    advance(s, rc.t_end, rc.scheme, cb);

    res.t_final = s.t;
    write_state(rc.out_dir + "/final.snap", s);
    write_cells_csv(rc.out_dir + "/final_cells.csv", s);
    res.ledger.write_csv_file(rc.out_dir + "/energy.csv");

    if (rc.scheme.visc.family == ViscosityFamily::constant) {
        res.audited = true;
        res.audit = dissipation_audit(res.ledger);
        std::snprintf(buf, sizeof buf,
                      "energy audit: %s  max_signed_residual %10.3e  worst_step_increase %10.3e",
                      res.audit.pass ? "pass" : "FAIL", res.audit.max_signed_residual,
                      res.audit.worst_step_increase);
        log << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "run complete: %d steps, t = %.10e", res.steps, res.t_final);
    log << buf << '\n';
    return res;
}

}  // namespace qflow
