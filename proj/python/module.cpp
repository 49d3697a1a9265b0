#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbphase/error.hpp"
#include "pbphase/herald.hpp"
#include "pbphase/pb_states.hpp"
#include "pbphase/phase_est.hpp"
#include "pbphase/wigner.hpp"

namespace py = pybind11;
using namespace pbphase;

namespace {

FockDensity density_from(const Eigen::MatrixXcd& rho) { return FockDensity(rho); }

}  // namespace

PYBIND11_MODULE(_pbphase, m) {
  m.doc() = "Pegg-Barnett phase-state simulator";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "pb_eigenstate",
      [](int s, int mm, double phi0) {
        const FockVector v = pb_eigenstate({s, mm, phi0});
        return std::vector<cplx>(v.amplitudes().begin(), v.amplitudes().end());
      },
      py::arg("s"), py::arg("m") = 0, py::arg("phi0") = 0.0, "Fock amplitudes of |phi_m>_s");

  m.def(
      "wigner_point",
      [](const Eigen::MatrixXcd& rho, double q, double p) { return wigner_point(density_from(rho), {q, p}); },
      py::arg("rho"), py::arg("q"), py::arg("p"));

  m.def(
      "wigner_grid",
      [](const Eigen::MatrixXcd& rho, double extent, int n) {
        return wigner_grid(density_from(rho), GridSpec::square(extent, n)).values;
      },
      py::arg("rho"), py::arg("extent") = 5.0, py::arg("n") = 101,
      "values[i, j] = W(q_i, p_j) on a square lattice");

  m.def(
      "negativity_volume", [](const Eigen::MatrixXcd& rho) { return negativity_volume(density_from(rho)); },
      py::arg("rho"));

  m.def(
      "effective_radius", [](const Eigen::MatrixXcd& rho) { return effective_radius(density_from(rho)); },
      py::arg("rho"));

  m.def("symmetric_factors", &symmetric_factors, py::arg("s"));

  m.def(
      "alpha_roots", [](int s, double q) { return solve_alphas(alpha_polynomial(s, q)); }, py::arg("s"),
      py::arg("q"));

  m.def(
      "interference_probs",
      [](int s, double phi_j, double phi_k) {
        return interference_probs(phase_state(s, phi_j), phase_state(s, phi_k)).probs;
      },
      py::arg("s"), py::arg("phi_j"), py::arg("phi_k"));

  py::class_<HeraldResult>(m, "HeraldResult")
      .def_readonly("alphas", &HeraldResult::alphas)
      .def_readonly("P", &HeraldResult::P)
      .def_readonly("F", &HeraldResult::F)
      .def_readonly("V", &HeraldResult::V)
      .def_readonly("leakage", &HeraldResult::leakage)
      .def_readonly("warnings", &HeraldResult::warnings)
      .def_property_readonly("rho_A", [](const HeraldResult& r) { return r.rho_A.matrix(); });

  m.def(
      "herald",
      [](int s, double r, double eta, bool with_negativity) {
        HeraldConfig cfg;
        cfg.s = s;
        cfg.r = r;
        cfg.eta = eta;
        return evaluate_herald(cfg, with_negativity);
      },
      py::arg("s") = 4, py::arg("r") = 0.1, py::arg("eta") = 1.0, py::arg("with_negativity") = false);
}
