#include "qflow/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace qflow {

namespace {

struct Value {
    enum class Kind { str, num, boolean, array } kind = Kind::num;
    std::string s;
    double x = 0.0;
    bool b = false;
    std::vector<double> arr;
    int line = 0;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        else if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

double parse_number(const std::string& tok, int line, const std::string& key) {
    const std::string t = trim(tok);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "': expected a number, got '" + t + "'");
    return x;
}

Value parse_value(const std::string& raw, int line, const std::string& key) {
    Value v;
    v.line = line;
    const std::string t = trim(raw);
    if (t.empty())
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' has no value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"')
            throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                              "': unterminated string");
        v.kind = Value::Kind::str;
        v.s = t.substr(1, t.size() - 2);
    } else if (t.front() == '[') {
        if (t.back() != ']')
            throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                              "': unterminated array");
        v.kind = Value::Kind::array;
        std::string body = t.substr(1, t.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            v.arr.push_back(parse_number(item, line, key));
        }
    } else if (t == "true" || t == "false") {
        v.kind = Value::Kind::boolean;
        v.b = (t == "true");
    } else {
        v.kind = Value::Kind::num;
        v.x = parse_number(t, line, key);
    }
    return v;
}

class Table {
  public:
    std::map<std::string, Value> kv;
    mutable std::map<std::string, bool> used;

    const Value* find(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        used[key] = true;
        return &it->second;
    }

    double num(const std::string& key, double dflt) const {
        const Value* v = find(key);
        if (!v) return dflt;
        if (v->kind != Value::Kind::num)
            throw ConfigError("config: key '" + key + "' must be a number");
        return v->x;
    }
    double req_num(const std::string& key) const {
        const Value* v = find(key);
        if (!v) throw ConfigError("config: missing required key '" + key + "'");
        if (v->kind != Value::Kind::num)
            throw ConfigError("config: key '" + key + "' must be a number");
        return v->x;
    }
    int integer(const std::string& key, int dflt) const {
        const double x = num(key, dflt);
        const int n = (int)x;
        if ((double)n != x) throw ConfigError("config: key '" + key + "' must be an integer");
        return n;
    }
    std::string str(const std::string& key, const std::string& dflt) const {
        const Value* v = find(key);
        if (!v) return dflt;
        if (v->kind != Value::Kind::str)
            throw ConfigError("config: key '" + key + "' must be a string");
        return v->s;
    }
    std::vector<double> array(const std::string& key, const std::vector<double>& dflt) const {
        const Value* v = find(key);
        if (!v) return dflt;
        if (v->kind != Value::Kind::array)
            throw ConfigError("config: key '" + key + "' must be an array");
        return v->arr;
    }

    void check_all_used() const {
        for (const auto& [key, val] : kv)
            if (!used.count(key))
                throw ConfigError("config line " + std::to_string(val.line) +
                                  ": unknown key '" + key + "'");
    }
};

Table parse_table(std::istream& in, const std::string& name) {
    Table tab;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(name + " line " + std::to_string(lineno) +
                                  ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(name + " line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + " line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw ConfigError(name + " line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (tab.kv.count(key))
            throw ConfigError(name + " line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        tab.kv[key] = parse_value(t.substr(eq + 1), lineno, key);
    }
    return tab;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& name) {
    const Table tab = parse_table(in, name);
    RunConfig rc;

    rc.grid.nx = tab.integer("grid.nx", 32);
    rc.grid.ny = tab.integer("grid.ny", 32);
    rc.grid.lx = tab.num("grid.lx", 1.0);
    rc.grid.ly = tab.num("grid.ly", 1.0);
    const std::string bc = tab.str("grid.bc", "dirichlet0");
    if (bc == "dirichlet0") rc.grid.bc = Bc::dirichlet0;
    else if (bc == "periodic") rc.grid.bc = Bc::periodic;
    else throw ConfigError("config: key 'grid.bc' must be \"dirichlet0\" or \"periodic\"");

    rc.d = tab.integer("tensor.d", 2);
    if (rc.d != 2 && rc.d != 3) throw ConfigError("config: key 'tensor.d' must be 2 or 3");

    MaterialParams& m = rc.scheme.mat;
    m.a = tab.num("material.a", m.a);
    m.b = tab.num("material.b", m.b);
    m.c = tab.num("material.c", m.c);
    m.lambda = tab.num("material.lambda", m.lambda);
    m.gamma = tab.num("material.gamma", m.gamma);

    ViscositySpec& v = rc.scheme.visc;
    const std::string fam = tab.str("viscosity.family", "constant");
    if (fam == "constant") v.family = ViscosityFamily::constant;
    else if (fam == "rational") v.family = ViscosityFamily::rational;
    else throw ConfigError("config: key 'viscosity.family' must be \"constant\" or \"rational\"");
    v.nu0 = tab.num("viscosity.nu0", v.nu0);
    v.nu1 = tab.num("viscosity.nu1", v.nu1);

    rc.scheme.dt = tab.req_num("scheme.dt");
    rc.t_end = tab.req_num("scheme.t_end");
    rc.scheme.eps = tab.num("scheme.eps", 0.0);
    const std::string mode = tab.str("scheme.mode", "standard");
    if (mode == "standard") rc.scheme.mode = SchemeMode::standard;
    else if (mode == "regularized") rc.scheme.mode = SchemeMode::regularized;
    else throw ConfigError("config: key 'scheme.mode' must be \"standard\" or \"regularized\"");
    rc.scheme.picard_tol = tab.num("scheme.picard_tol", rc.scheme.picard_tol);
    rc.scheme.picard_max = tab.integer("scheme.picard_max", rc.scheme.picard_max);

    rc.scheme.inner.tol = tab.num("solver.tol", rc.scheme.inner.tol);
    rc.scheme.inner.max_iter = tab.integer("solver.max_iter", rc.scheme.inner.max_iter);
    const std::string pc = tab.str("solver.pc", "none");
    if (pc == "none") rc.scheme.inner.pc = SolverConfig::Pc::none;
    else if (pc == "jacobi") rc.scheme.inner.pc = SolverConfig::Pc::jacobi;
    else throw ConfigError("config: key 'solver.pc' must be \"none\" or \"jacobi\"");

    const std::string init = tab.str("initial.type", "zero");
    if (init == "zero") rc.initial.kind = InitialSpec::Kind::zero;
    else if (init == "uniaxial_bubble") rc.initial.kind = InitialSpec::Kind::bubble;
    else if (init == "file") rc.initial.kind = InitialSpec::Kind::file;
    else
        throw ConfigError(
            "config: key 'initial.type' must be \"zero\", \"uniaxial_bubble\" or \"file\"");
    rc.initial.s = tab.num("initial.s", rc.initial.s);
    rc.initial.radius = tab.num("initial.radius", rc.initial.radius);
    const auto center = tab.array("initial.center", {rc.initial.cx, rc.initial.cy});
    if (center.size() != 2)
        throw ConfigError("config: key 'initial.center' must have two entries");
    rc.initial.cx = center[0];
    rc.initial.cy = center[1];
    const auto dir = tab.array("initial.director", {1.0, 0.0, 0.0});
    if (dir.size() != 2 && dir.size() != 3)
        throw ConfigError("config: key 'initial.director' must have two or three entries");
    rc.initial.director = {dir[0], dir[1], dir.size() == 3 ? dir[2] : 0.0};
    rc.initial.path = tab.str("initial.path", "");
    if (rc.initial.kind == InitialSpec::Kind::file && rc.initial.path.empty())
        throw ConfigError("config: initial.type = \"file\" requires key 'initial.path'");

    rc.out_dir = tab.str("run.out_dir", rc.out_dir);
    rc.snapshot_every = tab.integer("run.snapshot_every", rc.snapshot_every);
    rc.log_every = tab.integer("run.log_every", rc.log_every);
    if (rc.log_every < 1) throw ConfigError("config: key 'run.log_every' must be >= 1");
    if (rc.snapshot_every < 0)
        throw ConfigError("config: key 'run.snapshot_every' must be >= 0");

    tab.check_all_used();

    try {
        rc.grid.validate();
        rc.scheme.validate();
        if (rc.t_end <= 0.0) throw std::invalid_argument("scheme t_end must be > 0");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_run_config(in, path);
}

void echo_config(std::ostream& os, const RunConfig& rc) {
    os.precision(17);
    os << "[grid]\n"
       << "nx = " << rc.grid.nx << "\nny = " << rc.grid.ny << "\nlx = " << rc.grid.lx
       << "\nly = " << rc.grid.ly << "\nbc = \""
       << (rc.grid.bc == Bc::periodic ? "periodic" : "dirichlet0") << "\"\n\n";
    os << "[tensor]\nd = " << rc.d << "\n\n";
    const MaterialParams& m = rc.scheme.mat;
    os << "[material]\na = " << m.a << "\nb = " << m.b << "\nc = " << m.c
       << "\nlambda = " << m.lambda << "\ngamma = " << m.gamma << "\n\n";
    const ViscositySpec& v = rc.scheme.visc;
    os << "[viscosity]\nfamily = \""
       << (v.family == ViscosityFamily::constant ? "constant" : "rational")
       << "\"\nnu0 = " << v.nu0 << "\nnu1 = " << v.nu1 << "\n\n";
    os << "[scheme]\ndt = " << rc.scheme.dt << "\nt_end = " << rc.t_end
       << "\neps = " << rc.scheme.eps << "\nmode = \""
       << (rc.scheme.mode == SchemeMode::regularized ? "regularized" : "standard")
       << "\"\npicard_tol = " << rc.scheme.picard_tol
       << "\npicard_max = " << rc.scheme.picard_max << "\n\n";
    os << "[solver]\ntol = " << rc.scheme.inner.tol
       << "\nmax_iter = " << rc.scheme.inner.max_iter << "\npc = \""
       << (rc.scheme.inner.pc == SolverConfig::Pc::jacobi ? "jacobi" : "none") << "\"\n\n";
    os << "[initial]\ntype = \"";
    switch (rc.initial.kind) {
        case InitialSpec::Kind::zero: os << "zero"; break;
        case InitialSpec::Kind::bubble: os << "uniaxial_bubble"; break;
        case InitialSpec::Kind::file: os << "file"; break;
    }
    os << "\"\ns = " << rc.initial.s << "\nradius = " << rc.initial.radius << "\ncenter = ["
       << rc.initial.cx << ", " << rc.initial.cy << "]\ndirector = [" << rc.initial.director[0]
       << ", " << rc.initial.director[1] << ", " << rc.initial.director[2] << "]\n";
    if (!rc.initial.path.empty()) os << "path = \"" << rc.initial.path << "\"\n";
    os << "\n[run]\nout_dir = \"" << rc.out_dir << "\"\nsnapshot_every = " << rc.snapshot_every
       << "\nlog_every = " << rc.log_every << "\n";
}

}  // namespace qflow
