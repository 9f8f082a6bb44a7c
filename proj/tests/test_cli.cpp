#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"

// End-to-end checks of the installed command-line binary, driven through the
// shell. QFLOW_BIN is injected by the build.

namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
#ifdef _WIN32
    return rc;
#else
    return WEXITSTATUS(rc);
#endif
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream f(p);
    f << body;
}

std::string base_config(const std::string& out_dir, const std::string& initial,
                        double t_end) {
    std::ostringstream ss;
    ss << "[grid]\nnx = 16\nny = 16\nlx = 1.0\nly = 1.0\nbc = \"dirichlet0\"\n\n"
       << "[tensor]\nd = 2\n\n"
       << "[material]\na = -0.2\nb = 0.0\nc = 1.0\nlambda = 1.0\ngamma = 1.0\n\n"
       << "[viscosity]\nfamily = \"constant\"\nnu0 = 2.0\n\n"
       << "[scheme]\ndt = 1e-3\nt_end = " << t_end << "\n\n"
       << initial << "\n"
       << "[run]\nout_dir = \"" << out_dir << "\"\nsnapshot_every = 2\nlog_every = 1\n";
    return ss.str();
}

// small amplitude keeps dt = 1e-3 well inside the relaxation scale, so the
// run log's energy audit reflects a resolved first-order balance
const std::string kBubble =
    "[initial]\ntype = \"uniaxial_bubble\"\ns = 0.05\ncenter = [0.5, 0.5]\n"
    "radius = 0.22\ndirector = [1.0, 0.0]\n";

struct TmpDir {
    fs::path p{"cli_tmp"};
    TmpDir() {
        fs::remove_all(p);
        fs::create_directories(p);
    }
};

const std::string bin = QFLOW_BIN;

}  // namespace

TEST_CASE("bad invocations and bad configs are rejected") {
    TmpDir tmp;
    CHECK(run_cmd(bin + " >/dev/null 2>&1") != 0);
    CHECK(run_cmd(bin + " verify bogus >/dev/null 2>&1") == 1);
    CHECK(run_cmd(bin + " run cli_tmp/missing.toml >/dev/null 2>&1") == 1);

    write_file("cli_tmp/badsyntax.toml", "grid nx 16\n");
    CHECK(run_cmd(bin + " run cli_tmp/badsyntax.toml >/dev/null 2>&1") == 1);

    // a misspelled key is refused and reported by its full name
    std::string cfg = base_config("cli_tmp/never", kBubble, 1e-3);
    cfg.insert(cfg.find("ny = 16"), "nz = 8\n");
    write_file("cli_tmp/badkey.toml", cfg);
    CHECK(run_cmd(bin + " run cli_tmp/badkey.toml >/dev/null 2>cli_tmp/err.txt") == 1);
    CHECK(slurp("cli_tmp/err.txt").find("grid.nz") != std::string::npos);
    CHECK_FALSE(fs::exists("cli_tmp/never"));
}

TEST_CASE("identity suite runs from the command line") {
    TmpDir tmp;
    CHECK(run_cmd(bin + " verify identities --out cli_tmp/v >cli_tmp/out.txt 2>&1") == 0);
    CHECK(fs::exists("cli_tmp/v/summary.csv"));
    CHECK(fs::exists("cli_tmp/v/identities_d2.csv"));
    CHECK(fs::exists("cli_tmp/v/identities_d3.csv"));
    const std::string log = slurp("cli_tmp/out.txt");
    CHECK(log.find("[PASS]") != std::string::npos);
    CHECK(log.find("[FAIL]") == std::string::npos);
    // every summary row reports pass
    std::ifstream f("cli_tmp/v/summary.csv");
    std::string line;
    std::getline(f, line);  // header
    int rows = 0;
    while (std::getline(f, line)) {
        ++rows;
        CHECK(line.find(",1,") != std::string::npos);
    }
    CHECK(rows == 12);
}

TEST_CASE("a configured run produces the full artifact set and restarts") {
    TmpDir tmp;
    write_file("cli_tmp/run1.toml", base_config("cli_tmp/run1", kBubble, 5e-3));
    CHECK(run_cmd(bin + " run cli_tmp/run1.toml >cli_tmp/log1.txt 2>&1") == 0);

    for (const char* f : {"config.echo.toml", "energy.csv", "final.snap", "final_cells.csv",
                          "state_000002.snap", "state_000004.snap"})
        CHECK(fs::exists(fs::path("cli_tmp/run1") / f));

    {
        std::ifstream f("cli_tmp/run1/energy.csv");
        std::string header;
        std::getline(f, header);
        CHECK(header == "t,kinetic,free_energy,total,B,cumB,residual");
        int rows = 0;
        for (std::string line; std::getline(f, line);) ++rows;
        CHECK(rows == 6);  // initial state plus five steps
    }
    const std::string log = slurp("cli_tmp/log1.txt");
    CHECK(log.find("energy audit: pass") != std::string::npos);
    CHECK(log.find("run complete: 5 steps") != std::string::npos);

    // the echoed config parses back to an equivalent run
    CHECK(slurp("cli_tmp/run1/config.echo.toml").find("type = \"uniaxial_bubble\"") !=
          std::string::npos);

    // restart from the final snapshot and integrate further
    const std::string restart =
        "[initial]\ntype = \"file\"\npath = \"cli_tmp/run1/final.snap\"\n";
    write_file("cli_tmp/run2.toml", base_config("cli_tmp/run2", restart, 8e-3));
    CHECK(run_cmd(bin + " run cli_tmp/run2.toml >cli_tmp/log2.txt 2>&1") == 0);
    CHECK(slurp("cli_tmp/log2.txt").find("run complete: 3 steps") != std::string::npos);

    // restarting at or past the snapshot time is a configuration error
    write_file("cli_tmp/run3.toml", base_config("cli_tmp/run3", restart, 4e-3));
    CHECK(run_cmd(bin + " run cli_tmp/run3.toml >/dev/null 2>&1") == 1);
}

TEST_CASE("runs are reproducible, also across thread counts") {
    TmpDir tmp;
    write_file("cli_tmp/a.toml", base_config("cli_tmp/a", kBubble, 4e-3));
    write_file("cli_tmp/b.toml", base_config("cli_tmp/b", kBubble, 4e-3));
    write_file("cli_tmp/c.toml", base_config("cli_tmp/c", kBubble, 4e-3));
    CHECK(run_cmd(bin + " run cli_tmp/a.toml >/dev/null 2>&1") == 0);
    CHECK(run_cmd(bin + " run cli_tmp/b.toml >/dev/null 2>&1") == 0);
    CHECK(run_cmd("QFLOW_THREADS=2 " + bin + " run cli_tmp/c.toml >/dev/null 2>&1") == 0);

    const std::string a = slurp("cli_tmp/a/final.snap");
    CHECK(a.size() > 0);
    CHECK(a == slurp("cli_tmp/b/final.snap"));
    CHECK(a == slurp("cli_tmp/c/final.snap"));
    CHECK(slurp("cli_tmp/a/energy.csv") == slurp("cli_tmp/c/energy.csv"));
}
