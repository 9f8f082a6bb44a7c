#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qflow/io.hpp"
#include "qflow/parallel.hpp"
#include "qflow/verify.hpp"

namespace py = pybind11;
using namespace qflow;

namespace {

py::array_t<double> copy_out(const std::vector<double>& v, std::vector<py::ssize_t> shape) {
    py::array_t<double> out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

void copy_in(const py::array_t<double>& a, std::vector<double>& v, const char* what) {
    auto buf = a.request();
    if ((size_t)buf.size != v.size())
        throw py::value_error(std::string(what) + ": expected " + std::to_string(v.size()) +
                              " values, got " + std::to_string(buf.size));
    auto c = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
    std::copy(c.data(), c.data() + v.size(), v.begin());
}

Bc bc_from_string(const std::string& s) {
    if (s == "dirichlet0") return Bc::dirichlet0;
    if (s == "periodic") return Bc::periodic;
    throw py::value_error("bc must be 'dirichlet0' or 'periodic'");
}

}  // namespace

PYBIND11_MODULE(_qflow, m) {
    m.doc() = "finite-difference solver for coupled nematic flow";

    py::class_<GridSpec>(m, "Grid")
        .def(py::init([](int nx, int ny, double lx, double ly, const std::string& bc) {
                 GridSpec g{nx, ny, lx, ly, bc_from_string(bc)};
                 g.validate();
                 return g;
             }),
             py::arg("nx"), py::arg("ny"), py::arg("lx") = 1.0, py::arg("ly") = 1.0,
             py::arg("bc") = "dirichlet0")
        .def_readonly("nx", &GridSpec::nx)
        .def_readonly("ny", &GridSpec::ny)
        .def_readonly("lx", &GridSpec::lx)
        .def_readonly("ly", &GridSpec::ly)
        .def_property_readonly(
            "bc", [](const GridSpec& g) { return g.bc == Bc::periodic ? "periodic" : "dirichlet0"; })
        .def("hx", &GridSpec::hx)
        .def("hy", &GridSpec::hy);

    py::class_<MaterialParams>(m, "Material")
        .def(py::init<>())
        .def_readwrite("a", &MaterialParams::a)
        .def_readwrite("b", &MaterialParams::b)
        .def_readwrite("c", &MaterialParams::c)
        .def_readwrite("lambda_", &MaterialParams::lambda)
        .def_readwrite("gamma", &MaterialParams::gamma);

    py::class_<ViscositySpec>(m, "Viscosity")
        .def(py::init<>())
        .def_property(
            "family",
            [](const ViscositySpec& v) {
                return v.family == ViscosityFamily::constant ? "constant" : "rational";
            },
            [](ViscositySpec& v, const std::string& s) {
                if (s == "constant") v.family = ViscosityFamily::constant;
                else if (s == "rational") v.family = ViscosityFamily::rational;
                else throw py::value_error("family must be 'constant' or 'rational'");
            })
        .def_readwrite("nu0", &ViscositySpec::nu0)
        .def_readwrite("nu1", &ViscositySpec::nu1);

    py::class_<SolverConfig>(m, "Solver")
        .def(py::init<>())
        .def_readwrite("tol", &SolverConfig::tol)
        .def_readwrite("max_iter", &SolverConfig::max_iter);

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SchemeConfig::dt)
        .def_readwrite("eps", &SchemeConfig::eps)
        .def_property(
            "mode",
            [](const SchemeConfig& c) {
                return c.mode == SchemeMode::regularized ? "regularized" : "standard";
            },
            [](SchemeConfig& c, const std::string& s) {
                if (s == "standard") c.mode = SchemeMode::standard;
                else if (s == "regularized") c.mode = SchemeMode::regularized;
                else throw py::value_error("mode must be 'standard' or 'regularized'");
            })
        .def_readwrite("picard_tol", &SchemeConfig::picard_tol)
        .def_readwrite("picard_max", &SchemeConfig::picard_max)
        .def_readwrite("material", &SchemeConfig::mat)
        .def_readwrite("viscosity", &SchemeConfig::visc)
        .def_readwrite("inner", &SchemeConfig::inner);

    py::class_<QField>(m, "QField")
        .def(py::init([](const GridSpec& g, int d) { return QField(g, d); }), py::arg("grid"),
             py::arg("d") = 2)
        .def_readonly("d", &QField::d)
        .def_readonly("grid", &QField::g)
        .def_property_readonly("ncoef", &QField::nc)
        .def("array",
             [](const QField& Q) {
                 return copy_out(Q.a, {Q.g.ny, Q.g.nx, Q.nc()});
             })
        .def("set_array",
             [](QField& Q, const py::array_t<double>& a) { copy_in(a, Q.a, "QField"); });

    py::class_<VelocityField>(m, "Velocity")
        .def(py::init([](const GridSpec& g) { return VelocityField(g); }), py::arg("grid"))
        .def_readonly("grid", &VelocityField::g)
        .def("u_array",
             [](const VelocityField& v) { return copy_out(v.u, {v.g.ny, v.g.nx + 1}); })
        .def("v_array",
             [](const VelocityField& v) { return copy_out(v.v, {v.g.ny + 1, v.g.nx}); })
        .def("set_u",
             [](VelocityField& v, const py::array_t<double>& a) { copy_in(a, v.u, "u faces"); })
        .def("set_v",
             [](VelocityField& v, const py::array_t<double>& a) { copy_in(a, v.v, "v faces"); });

    py::class_<State>(m, "State")
        .def(py::init([](const GridSpec& g, int d) {
                 return State{0.0, VelocityField(g), QField(g, d)};
             }),
             py::arg("grid"), py::arg("d") = 2)
        .def_readwrite("t", &State::t)
        .def_readwrite("u", &State::u)
        .def_readwrite("Q", &State::Q);

    py::class_<PicardReport>(m, "PicardReport")
        .def_readonly("iterations", &PicardReport::iterations)
        .def_readonly("converged", &PicardReport::converged)
        .def_readonly("residuals", &PicardReport::residuals)
        .def_readonly("rho", &PicardReport::rho);

    m.def("set_threads", &set_threads, py::arg("n"));

    m.def(
        "uniaxial",
        [](double s, std::array<double, 3> n, int d) {
            const QTensor q = uniaxial(s, n, d);
            return std::vector<double>(q.q.begin(), q.q.begin() + ncoef(d));
        },
        py::arg("s"), py::arg("director"), py::arg("d") = 2);

    m.def(
        "bulk_energy",
        [](std::vector<double> coeffs, int d, const MaterialParams& p) {
            if ((int)coeffs.size() != ncoef(d))
                throw py::value_error("coefficient count does not match d");
            QTensor q(d);
            std::copy(coeffs.begin(), coeffs.end(), q.q.begin());
            return bulk_energy_fB(q, p);
        },
        py::arg("coeffs"), py::arg("d"), py::arg("material"));

    m.def("uniaxial_bubble", &uniaxial_bubble, py::arg("grid"), py::arg("d"), py::arg("s"),
          py::arg("cx"), py::arg("cy"), py::arg("radius"), py::arg("director"));

    m.def("laplacian", &laplacian_q, py::arg("Q"));
    m.def("biharmonic", &biharmonic_q, py::arg("Q"));

    m.def(
        "divergence",
        [](const VelocityField& v) {
            const ScalarField d = div_mac(v);
            return copy_out(d.a, {d.g.ny, d.g.nx});
        },
        py::arg("vel"));
    m.def("max_abs_div", &max_abs_div, py::arg("vel"));

    m.def(
        "project",
        [](const VelocityField& v, double tol) {
            SolverConfig cfg;
            cfg.tol = tol;
            ProjectionResult r = helmholtz_project(v, cfg);
            return py::make_tuple(r.vel, r.stats.iterations);
        },
        py::arg("vel"), py::arg("tol") = 1e-10);

    m.def("kinetic_energy", &kinetic_energy, py::arg("vel"));
    m.def("free_energy", &free_energy, py::arg("Q"), py::arg("material"));
    m.def("dissipation", &dissipation_exact, py::arg("vel"), py::arg("Q"), py::arg("material"),
          py::arg("viscosity"));

    m.def(
        "step",
        [](State& s, const SchemeConfig& cfg) {
            PicardResult r = picard_step(s, cfg);
            s = r.state;
            return r.report;
        },
        py::arg("state"), py::arg("config"), "one fixed-point time step, in place");

    m.def(
        "advance",
        [](State& s, double t_end, const SchemeConfig& cfg) {
            int steps = 0;
            advance(s, t_end, cfg,
                    [&steps](const State&, const PicardReport&, double) { ++steps; });
            return steps;
        },
        py::arg("state"), py::arg("t_end"), py::arg("config"));

    m.def(
        "identity_checks",
        [](std::uint64_t seed, int samples, int d) {
            py::list out;
            for (const CheckReport& c : identity_suite(seed, samples, d)) {
                py::dict row;
                row["name"] = c.name;
                row["samples"] = c.samples;
                row["max_abs_err"] = c.max_abs_err;
                row["threshold"] = c.threshold;
                row["pass"] = c.pass;
                out.append(row);
            }
            return out;
        },
        py::arg("seed") = 12345, py::arg("samples") = 200, py::arg("d") = 2);

    m.def("write_state", &write_state, py::arg("path"), py::arg("state"));
    m.def("read_state", &read_state, py::arg("path"));
}
