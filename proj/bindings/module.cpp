#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "mhd/adapt.hpp"
#include "mhd/diagnostics.hpp"
#include "mhd/problems.hpp"
#include "mhd/runner.hpp"
#include "mhd/stepper.hpp"

namespace py = pybind11;
using namespace mhd;

namespace {

py::dict mesh_counts(int nx, int ny) {
    const SpacePair sp = build_spaces(build_rect_mesh(0.0, 1.0, 0.0, 1.0, nx, ny));
    py::dict d;
    d["vertices"] = sp.n_vertices;
    d["edges"] = sp.n_edges;
    d["triangles"] = sp.mesh.triangles.size();
    d["velocity_dofs"] = sp.n_velocity_dofs;
    d["pressure_dofs"] = sp.n_pressure_dofs;
    return d;
}

py::tuple wave_zp(double x, double y, double t) {
    const ProblemSpec prob = travelling_wave(PhysicalParams(2.5e-4, 2.5e-4), Vec2::Zero());
    const Vec2 v = prob.exact_zp(Vec2(x, y), t);
    return py::make_tuple(v.x(), v.y());
}

double step_control(double tau, double lte, double tol, double kappa, double tau_min,
                    double tau_max) {
    ControllerConfig cfg;
    cfg.tol = tol;
    cfg.kappa = kappa;
    cfg.tau_min = tau_min;
    cfg.tau_max = tau_max;
    return control_step(tau, lte, cfg);
}

py::dict conserve_demo(int n, int steps, double dt) {
    const ProblemSpec prob = decay_problem(PhysicalParams(0.02, 0.005), Vec2(0.5, 0.0));
    const SpacePair sp = build_spaces(build_rect_mesh(0.0, 1.0, 0.0, 1.0, n, n));
    PimOptions opt;
    opt.picard_tol = 1e-12;
    PimStepper stepper(sp, prob, opt);

    ElsasserState s = stepper.initial_state(0.0);
    const double E0 = energy_elsasser(s.zp.coeffs, s.zm.coeffs, stepper.ops().M);
    double diss = 0.0;
    for (int k = 0; k < steps; ++k) {
        auto [next, rep] = stepper.step(s, dt);
        diss += rep.dissipation_increment;
        s = std::move(next);
    }
    const double EN = energy_elsasser(s.zp.coeffs, s.zm.coeffs, stepper.ops().M);
    py::dict d;
    d["E0"] = E0;
    d["EN"] = EN;
    d["DN"] = diss;
    d["balance_defect_rel"] = std::abs(EN + diss - E0) / std::max(std::abs(E0), 1e-30);
    return d;
}

} // namespace

PYBIND11_MODULE(_elsmhd, m) {
    m.doc() = "core operations of the partitioned implicit midpoint MHD solver";

    m.def("mesh_counts", &mesh_counts, py::arg("nx"), py::arg("ny"),
          "degree-of-freedom counts of the velocity/pressure pair on the unit square");
    m.def("compute_R", &compute_R, py::arg("rho_n"), py::arg("rho_nm1"),
          "variable-step error-constant ratio of the two-step predictor");
    m.def("control_step", &step_control, py::arg("tau"), py::arg("lte"), py::arg("tol"),
          py::arg("kappa") = 0.95, py::arg("tau_min") = 1e-6, py::arg("tau_max") = 1e-4,
          "next step size from the clamped third-order controller");
    m.def("theoretical_rate",
          [](double nu, double nu_m) { return theoretical_rate(PhysicalParams(nu, nu_m)); },
          py::arg("nu"), py::arg("nu_m"), "proven sweep contraction factor");
    m.def("theoretical_tau_bound",
          [](double nu, double nu_m, double gamma, int d) {
              return theoretical_tau_bound(PhysicalParams(nu, nu_m), gamma, d);
          },
          py::arg("nu"), py::arg("nu_m"), py::arg("gamma"), py::arg("d") = 2,
          "step-size bound guaranteeing sweep contraction");
    m.def("wave_zp", &wave_zp, py::arg("x"), py::arg("y"), py::arg("t"),
          "z+ component of the travelling-wave solution");
    m.def("lindberg_amplitude", &lindberg_G, py::arg("t"), py::arg("omega") = 3.1,
          "impulsive time amplitude driving the stiff duct problem");
    m.def("conserve_demo", &conserve_demo, py::arg("n") = 8, py::arg("steps") = 5,
          py::arg("dt") = 0.02, "unforced decay march returning the energy budget");
    m.def("csv_num", &csv_num, py::arg("v"), "shortest round-trip decimal form");
}
