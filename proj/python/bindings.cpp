#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmstab/config.hpp"
#include "pmstab/runner.hpp"
#include "pmstab/stability.hpp"
#include "pmstab/symbols.hpp"

namespace py = pybind11;
using namespace pmstab;

PYBIND11_MODULE(_pmstab, m) {
    m.doc() = "Stability laboratory for the thermoelastic plate-membrane "
              "transmission system (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_readwrite("alpha", &PhysicalParams::alpha)
        .def_readwrite("beta", &PhysicalParams::beta)
        .def_readwrite("beta1", &PhysicalParams::beta1)
        .def_readwrite("beta2", &PhysicalParams::beta2)
        .def_readwrite("rho0", &PhysicalParams::rho0)
        .def_readwrite("rho1", &PhysicalParams::rho1)
        .def_readwrite("rho2", &PhysicalParams::rho2)
        .def_readwrite("sigma", &PhysicalParams::sigma)
        .def_readwrite("m", &PhysicalParams::m)
        .def_readwrite("kappa", &PhysicalParams::kappa)
        .def_readwrite("mu", &PhysicalParams::mu)
        .def("validate", &PhysicalParams::validate);

    py::class_<Geometry>(m, "Geometry")
        .def(py::init<>())
        .def_readwrite("r_in", &Geometry::r_in)
        .def_readwrite("r_out", &Geometry::r_out)
        .def("validate", &Geometry::validate);

    py::class_<CubicCoeffs>(m, "CubicCoeffs")
        .def(py::init([](double a, double b, double c) {
                 return CubicCoeffs{a, b, c};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readwrite("a", &CubicCoeffs::a)
        .def_readwrite("b", &CubicCoeffs::b)
        .def_readwrite("c", &CubicCoeffs::c)
        .def("routh_condition", &CubicCoeffs::routh_condition);

    m.def("characteristic_cubic", &characteristic_cubic, py::arg("params"),
          py::arg("xi_norm"));
    m.def("hurwitz_stable", &hurwitz_stable, py::arg("coeffs"));
    m.def(
        "cubic_roots",
        [](const CubicCoeffs& c) {
            const auto roots = cubic_roots(c);
            return std::vector<Complex>(roots.begin(), roots.end());
        },
        py::arg("coeffs"));
    m.def(
        "principal_determinant",
        [](const PhysicalParams& p, Complex lambda, double xi1, double xi2) {
            SymbolPoint pt;
            pt.lambda = lambda;
            pt.xi << xi1, xi2;
            return principal_determinant(p, pt);
        },
        py::arg("params"), py::arg("lam"), py::arg("xi1"), py::arg("xi2"));

    py::class_<EllipticityScan>(m, "EllipticityScan")
        .def_readonly("min_abs_det", &EllipticityScan::min_abs_det)
        .def_property_readonly("argmin_lambda",
                               [](const EllipticityScan& s) { return s.argmin.lambda; })
        .def_property_readonly("argmin_xi", [](const EllipticityScan& s) {
            return std::pair<double, double>(s.argmin.xi[0], s.argmin.xi[1]);
        });
    m.def("ellipticity_scan", &ellipticity_scan, py::arg("params"),
          py::arg("grid_density"));

    py::enum_<LsBoundarySet>(m, "LsBoundarySet")
        .value("clamped_robin", LsBoundarySet::clamped_robin)
        .value("free_robin", LsBoundarySet::free_robin);
    m.def(
        "lopatinskii_shapiro_check",
        [](const PhysicalParams& p, double xi1, Complex lambda, LsBoundarySet set) {
            return lopatinskii_shapiro_check(LsProblem{p, xi1, lambda, set});
        },
        py::arg("params"), py::arg("xi1"), py::arg("lam"), py::arg("bc_set"));

    m.def(
        "geometric_condition_scan",
        [](const Geometry& g, double x, double y) {
            const GcScanResult r = geometric_condition_scan(g, {x, y});
            return std::tuple<double, double, bool>(r.min, r.max, r.satisfied());
        },
        py::arg("geometry"), py::arg("x0_x"), py::arg("x0_y"));

    py::enum_<SystemKind>(m, "SystemKind")
        .value("full", SystemKind::full)
        .value("membrane_dirichlet", SystemKind::membrane_dirichlet);

    py::class_<ModeGrid>(m, "ModeGrid")
        .def_readonly("k", &ModeGrid::k)
        .def_readonly("n_annulus", &ModeGrid::n_annulus)
        .def_readonly("n_disk", &ModeGrid::n_disk)
        .def_property_readonly(
            "annulus_nodes", [](const ModeGrid& g) { return g.annulus.nodes; })
        .def_property_readonly("disk_nodes",
                               [](const ModeGrid& g) { return g.disk.nodes; })
        .def_property_readonly("annulus_quad",
                               [](const ModeGrid& g) { return g.annulus.quad; })
        .def_property_readonly("disk_quad",
                               [](const ModeGrid& g) { return g.disk.quad; });
    m.def("build_mode_grid", &build_mode_grid, py::arg("geometry"), py::arg("k"),
          py::arg("n_annulus"), py::arg("n_disk"));

    py::enum_<Domain>(m, "Domain").value("annulus", Domain::annulus).value(
        "disk", Domain::disk);
    m.def("laplacian_k", &laplacian_k, py::arg("grid"), py::arg("domain"));
    m.def("bilaplacian_k", &bilaplacian_k, py::arg("grid"));

    py::class_<ModeOperator>(m, "ModeOperator")
        .def_readonly("k", &ModeOperator::k)
        .def_readonly("generator", &ModeOperator::generator)
        .def_readonly("constraints", &ModeOperator::constraints)
        .def_readonly("gram", &ModeOperator::gram)
        .def_readonly("basis", &ModeOperator::basis)
        .def_readonly("reduced", &ModeOperator::reduced);
    m.def(
        "assemble",
        [](const PhysicalParams& p, const ModeGrid& g, SystemKind kind) {
            return assemble(p, g, kind);
        },
        py::arg("params"), py::arg("grid"), py::arg("kind") = SystemKind::full);

    m.def("spectrum",
          [](const ModeOperator& op) { return Eigen::VectorXcd(spectrum(op)); });
    m.def("spectral_abscissa", &spectral_abscissa);
    m.def("spectral_abscissa_profile", &spectral_abscissa_profile, py::arg("params"),
          py::arg("geometry"), py::arg("k_max"), py::arg("n"));
    m.def("resolvent_norm", &resolvent_norm, py::arg("op"), py::arg("lam"));

    py::class_<EnergyTrajectory>(m, "EnergyTrajectory")
        .def_readonly("times", &EnergyTrajectory::times)
        .def_readonly("energies", &EnergyTrajectory::energies)
        .def_readonly("dissipation_integral", &EnergyTrajectory::dissipation_integral);
    py::enum_<Preset>(m, "Preset")
        .value("plate_bump", Preset::plate_bump)
        .value("membrane_bump", Preset::membrane_bump)
        .value("thermal_spot", Preset::thermal_spot)
        .value("mixed", Preset::mixed);
    m.def(
        "evolve",
        [](const PhysicalParams& p, const Geometry& g, std::vector<int> modes,
           Preset preset, double t_final, double dt, int n, SystemKind kind,
           double frequency_cutoff) {
            EvolveOptions opt;
            opt.modes = std::move(modes);
            opt.preset = preset;
            opt.t_final = t_final;
            opt.dt = dt;
            opt.n_annulus = opt.n_disk = n;
            opt.kind = kind;
            opt.frequency_cutoff = frequency_cutoff;
            return evolve(p, g, opt);
        },
        py::arg("params"), py::arg("geometry"), py::arg("modes"), py::arg("preset"),
        py::arg("t_final"), py::arg("dt"), py::arg("n") = 32,
        py::arg("kind") = SystemKind::full, py::arg("frequency_cutoff") = 0.0);

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("gamma", &DecayFit::gamma)
        .def_readonly("omega", &DecayFit::omega)
        .def_readonly("r2_algebraic", &DecayFit::r2_algebraic)
        .def_readonly("r2_exponential", &DecayFit::r2_exponential)
        .def_readonly("r_hat", &DecayFit::r_hat)
        .def_readonly("exponential_better", &DecayFit::exponential_better)
        .def_readonly("inconclusive", &DecayFit::inconclusive);
    m.def(
        "polynomial_decay_probe",
        [](const PhysicalParams& p, const Geometry& g, std::vector<int> modes,
           double t_final, double dt, int n) {
            EvolveOptions opt;
            opt.modes = std::move(modes);
            opt.t_final = t_final;
            opt.dt = dt;
            opt.n_annulus = opt.n_disk = n;
            return polynomial_decay_probe(p, g, opt);
        },
        py::arg("params"), py::arg("geometry"), py::arg("modes"), py::arg("t_final"),
        py::arg("dt") = 0.01, py::arg("n") = 32);

    m.def(
        "run_config_text",
        [](const std::string& text) { return run(parse_config(text)); },
        py::arg("text"),
        "Parse a flat key-value configuration and run it; returns the exit "
        "status (0 success, 2 config error, 3 numerical error).");
    m.def(
        "run_config_file", [](const std::string& path) { return run(load_config(path)); },
        py::arg("path"));
}
