#include "qflow/io.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qflow/ops.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace qflow {

namespace {

const char* bc_name(Bc bc) { return bc == Bc::periodic ? "periodic" : "dirichlet0"; }

Bc bc_from(const std::string& s, const std::string& path) {
    if (s == "periodic") return Bc::periodic;
    if (s == "dirichlet0") return Bc::dirichlet0;
    throw std::runtime_error(path + ": unknown boundary tag '" + s + "'");
}

void write_header(std::ostream& os, const char* kind, const GridSpec& g, int d, double t) {
    os.precision(17);
    os << "QFLOW1 " << kind << ' ' << g.nx << ' ' << g.ny << ' ' << d << ' ' << bc_name(g.bc)
       << ' ' << g.lx << ' ' << g.ly << ' ' << t << '\n';
}

struct Header {
    std::string kind;
    GridSpec g;
    int d = 0;
    double t = 0.0;
};

Header read_header(std::istream& is, const std::string& path, const std::string& want) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(path + ": cannot read header");
    std::istringstream ls(line);
    std::string magic, bc;
    Header h;
    if (!(ls >> magic >> h.kind >> h.g.nx >> h.g.ny >> h.d >> bc >> h.g.lx >> h.g.ly >> h.t) ||
        magic != "QFLOW1")
        throw std::runtime_error(path + ": not a QFLOW1 snapshot");
    if (h.kind != want)
        throw std::runtime_error(path + ": expected kind '" + want + "', found '" + h.kind + "'");
    h.g.bc = bc_from(bc, path);
    h.g.validate();
    return h;
}

void write_block(std::ostream& os, const std::vector<double>& a) {
    os.write(reinterpret_cast<const char*>(a.data()),
             (std::streamsize)(a.size() * sizeof(double)));
}

void read_block(std::istream& is, std::vector<double>& a, const std::string& path) {
    is.read(reinterpret_cast<char*>(a.data()), (std::streamsize)(a.size() * sizeof(double)));
    if (!is) throw std::runtime_error(path + ": truncated data block");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return is;
}

}  // namespace

void write_qfield(const std::string& path, const QField& Q, double t) {
    auto os = open_out(path);
    write_header(os, "q", Q.g, Q.d, t);
    write_block(os, Q.a);
    if (!os) throw std::runtime_error("write failed: " + path);
}

QField read_qfield(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, path, "q");
    QField Q(h.g, h.d);
    read_block(is, Q.a, path);
    return Q;
}

void write_scalar(const std::string& path, const ScalarField& f) {
    auto os = open_out(path);
    write_header(os, "p", f.g, 0, 0.0);
    write_block(os, f.a);
    if (!os) throw std::runtime_error("write failed: " + path);
}

ScalarField read_scalar(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, path, "p");
    ScalarField f(h.g);
    read_block(is, f.a, path);
    return f;
}

void write_state(const std::string& path, const State& s) {
    auto os = open_out(path);
    write_header(os, "state", s.Q.g, s.Q.d, s.t);
    write_block(os, s.Q.a);
    write_block(os, s.u.u);
    write_block(os, s.u.v);
    if (!os) throw std::runtime_error("write failed: " + path);
}

State read_state(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, path, "state");
    State s{h.t, VelocityField(h.g), QField(h.g, h.d)};
    read_block(is, s.Q.a, path);
    read_block(is, s.u.u, path);
    read_block(is, s.u.v, path);
    return s;
}

void write_cells_csv(const std::string& path, const State& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const GridSpec& g = s.Q.g;
    const int nc = s.Q.nc();
    os << "i,j,x,y,u,v";
    for (int c = 0; c < nc; ++c) os << ",q" << c;
    os << '\n';
    os.precision(17);
    const VecField uc = velocity_at_centers(s.u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            os << i << ',' << j << ',' << g.xc(i) << ',' << g.yc(j) << ','
               << uc.x[cid(g, i, j)] << ',' << uc.y[cid(g, i, j)];
            for (int c = 0; c < nc; ++c) os << ',' << s.Q.at(i, j, c);
            os << '\n';
        }
}

}  // namespace qflow
