#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qflow/io.hpp"
#include "qflow/parallel.hpp"
#include "qflow/runner.hpp"
#include "qflow/verify.hpp"

namespace {

void note(std::vector<qflow::SuiteSummary>& rows, bool& all_pass, const std::string& name,
          bool pass, double value) {
    rows.push_back({name, pass, value});
    all_pass = all_pass && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%s] %-36s %.6e", pass ? "PASS" : "FAIL", name.c_str(),
                  value);
    std::cout << buf << '\n';
}

int cmd_run(const std::string& cfg_path) {
    try {
        const qflow::RunConfig rc = qflow::load_run_config(cfg_path);
        qflow::run_simulation(rc, std::cout);
        return 0;
    } catch (const qflow::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_dir) {
    using namespace qflow;
    const bool all = suite == "all";
    if (!all && suite != "identities" && suite != "cancellation" && suite != "mms" &&
        suite != "epsilon") {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected identities|cancellation|mms|epsilon|all)\n";
        return 1;
    }
    std::filesystem::create_directories(out_dir);
    std::vector<SuiteSummary> rows;
    bool all_pass = true;

    if (all || suite == "identities") {
        for (int d : {2, 3}) {
            const auto checks = identity_suite(seed, 1000, d);
            write_check_csv(out_dir + "/identities_d" + std::to_string(d) + ".csv", checks);
            for (const auto& c : checks)
                note(rows, all_pass, "identities_d" + std::to_string(d) + "/" + c.name, c.pass,
                     c.max_abs_err);
        }
    }
    if (all || suite == "cancellation") {
        const CancellationReport rep = discrete_cancellation(seed, 64);
        note(rows, all_pass, rep.periodic.name, rep.periodic.pass, rep.periodic.max_rel_err);
        std::ofstream os(out_dir + "/cancellation.csv");
        os.precision(17);
        os << "case,n,gap\nperiodic,64," << rep.periodic.max_rel_err << '\n';
        char buf[160];
        for (size_t k = 0; k < rep.dirichlet_gap.size(); ++k) {
            os << "dirichlet0," << rep.dirichlet_grids[k] << ',' << rep.dirichlet_gap[k] << '\n';
            std::snprintf(buf, sizeof buf, "       %-36s %.6e",
                          ("dirichlet0 boundary defect, n=" +
                           std::to_string(rep.dirichlet_grids[k])).c_str(),
                          rep.dirichlet_gap[k]);
            std::cout << buf << '\n';
        }
        std::snprintf(buf, sizeof buf, "       %-36s %.3f", "dirichlet0 defect decay rate",
                      rep.dirichlet_slope);
        std::cout << buf << '\n';
    }
    if (all || suite == "mms") {
        std::ofstream os(out_dir + "/mms.csv");
        os.precision(17);
        os << "problem,n_or_steps,error,order\n";
        for (const char* p : {"heat", "stokes", "coupled_linear"}) {
            const MmsReport rep = mms_convergence(p, {16, 32, 64});
            for (size_t k = 0; k < rep.errors.size(); ++k)
                os << rep.problem << ',' << rep.grids[k] << ',' << rep.errors[k] << ','
                   << rep.order << '\n';
            note(rows, all_pass, "mms_" + rep.problem + "_spatial_order", rep.pass, rep.order);
        }
        const MmsReport tr = mms_temporal();
        for (size_t k = 0; k < tr.errors.size(); ++k)
            os << tr.problem << ',' << tr.grids[k] << ',' << tr.errors[k] << ',' << tr.order
               << '\n';
        note(rows, all_pass, "mms_temporal_order", tr.pass, tr.order);
    }
    if (all || suite == "epsilon") {
        const EpsilonReport rep = epsilon_limit_study();
        std::ofstream os(out_dir + "/epsilon.csv");
        os.precision(17);
        os << "eps,distance_to_unregularized\n";
        for (size_t k = 0; k < rep.eps.size(); ++k)
            os << rep.eps[k] << ',' << rep.dist[k] << '\n';
        note(rows, all_pass, "epsilon_limit_decreasing", rep.strictly_decreasing,
             rep.dist.empty() ? 0.0 : rep.dist.back());
    }

    write_summary_csv(out_dir + "/summary.csv", rows);
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("QFLOW_THREADS")) qflow::set_threads(std::atoi(t));

    CLI::App app{"finite-difference solver for coupled nematic flow"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "advance a configured simulation");
    std::string cfg_path;
    run->add_option("config", cfg_path, "TOML configuration file")->required();

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    ver->add_option("suite", suite, "identities|cancellation|mms|epsilon|all")->required();
    std::uint64_t seed = 12345;
    ver->add_option("--seed", seed, "random seed for sampled checks");
    std::string out_dir = "verify_out";
    ver->add_option("--out", out_dir, "directory for CSV reports");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(cfg_path);
    return cmd_verify(suite, seed, out_dir);
}
