#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlb/diffusive.hpp"
#include "qlb/errors.hpp"
#include "qlb/io.hpp"
#include "qlb/moments.hpp"
#include "qlb/qlbe_grid.hpp"
#include "qlb/rates.hpp"
#include "qlb/special.hpp"
#include "qlb/trajectories.hpp"

namespace py = pybind11;
using namespace qlb;

PYBIND11_MODULE(_qlb, m) {
  m.doc() = "kinetic-theory toolkit for a tracer particle in an ideal gas";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericError>(m, "NumericError");

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def(py::init([](const std::vector<double>& v) {
        if (v.size() != 3) throw py::value_error("Vec3 needs 3 components");
        return Vec3{v[0], v[1], v[2]};
      }))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("norm", &Vec3::norm)
      .def("__repr__", [](const Vec3& v) {
        return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
               std::to_string(v.z) + ")";
      });
  py::implicitly_convertible<py::sequence, Vec3>();

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](double m_, double M, double T, double n_gas, double sigma_tot,
                       double hbar) {
             PhysicalParams p;
             p.m = m_;
             p.M = M;
             p.T = T;
             p.n_gas = n_gas;
             p.sigma_tot = sigma_tot;
             p.hbar = hbar;
             p.validate();
             return p;
           }),
           py::arg("m") = 1.0, py::arg("M") = 1.0, py::arg("T") = 1.0, py::arg("n_gas") = 1.0,
           py::arg("sigma_tot") = 1.0, py::arg("hbar") = 1.0)
      .def_readwrite("m", &PhysicalParams::m)
      .def_readwrite("M", &PhysicalParams::M)
      .def_readwrite("T", &PhysicalParams::T)
      .def_readwrite("n_gas", &PhysicalParams::n_gas)
      .def_readwrite("sigma_tot", &PhysicalParams::sigma_tot)
      .def_readwrite("hbar", &PhysicalParams::hbar)
      .def("mass_ratio", &PhysicalParams::mass_ratio);

  py::class_<DerivedScales>(m, "DerivedScales")
      .def_readonly("p_beta", &DerivedScales::p_beta)
      .def_readonly("v_beta", &DerivedScales::v_beta)
      .def_readonly("m_star", &DerivedScales::m_star)
      .def_readonly("lambda_th", &DerivedScales::lambda_th)
      .def_readonly("lambda_th_gas", &DerivedScales::lambda_th_gas);
  m.def("derive_scales", &derive_scales);
  m.def("maxwell_boltzmann", &maxwell_boltzmann);
  m.def("rel", &rel);

  m.def("erf", &qlb::erf);
  m.def("kummer_a", &kummer_a);
  m.def("kummer_b", &kummer_b);

  py::class_<CrossSectionModel>(m, "CrossSectionModel")
      .def_static("constant", &CrossSectionModel::constant)
      .def_static("born", &CrossSectionModel::born)
      .def_static("born_table", &CrossSectionModel::born_table);

  m.def("m_in_classical", &m_in_classical, py::arg("P"), py::arg("Q"), py::arg("params"),
        py::arg("model") = CrossSectionModel::constant());
  m.def("m_in_quantum", &m_in_quantum, py::arg("P"), py::arg("Pprime"), py::arg("Q"),
        py::arg("params"), py::arg("model") = CrossSectionModel::constant());
  m.def(
      "m_out_classical",
      [](const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model) {
        return m_out_classical(P, par, model);
      },
      py::arg("P"), py::arg("params"), py::arg("model") = CrossSectionModel::constant());
  m.def("sigma_tilde", &sigma_tilde);

  py::class_<DiffusionCoefficients>(m, "DiffusionCoefficients")
      .def_readonly("eta", &DiffusionCoefficients::eta)
      .def_readonly("D_pp", &DiffusionCoefficients::D_pp)
      .def_readonly("D_xx", &DiffusionCoefficients::D_xx)
      .def_readonly("mass_ratio_warning", &DiffusionCoefficients::mass_ratio_warning);
  m.def("coefficients", &coefficients);
  m.def("eta_by_quadrature", &eta_by_quadrature);

  py::class_<MomentState>(m, "MomentState")
      .def(py::init([](const Vec3& P, double E) {
             return MomentState{P, E};
           }),
           py::arg("P"), py::arg("E"))
      .def_readwrite("P", &MomentState::P)
      .def_readwrite("E", &MomentState::E);
  py::enum_<MomentMode>(m, "MomentMode")
      .value("ExactClosure", MomentMode::ExactClosure)
      .value("Diffusive", MomentMode::Diffusive);
  m.def("integrate_moments", &integrate_moments, py::arg("initial"), py::arg("time_grid"),
        py::arg("params"), py::arg("mode") = MomentMode::ExactClosure);

  py::class_<InitialCondition>(m, "InitialCondition")
      .def_static("delta", &InitialCondition::delta)
      .def_static("maxwell_tracer", &InitialCondition::maxwell_tracer);
  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_readonly("t", &EnsembleStats::t)
      .def_readonly("mean_P", &EnsembleStats::mean_P)
      .def_readonly("mean_E", &EnsembleStats::mean_E)
      .def_readonly("cov_P", &EnsembleStats::cov_P)
      .def_readonly("se_P", &EnsembleStats::se_P)
      .def_readonly("se_E", &EnsembleStats::se_E)
      .def_readonly("n_traj", &EnsembleStats::n_traj);
  m.def("ensemble_moments", &ensemble_moments, py::arg("init"), py::arg("n_traj"),
        py::arg("time_grid"), py::arg("params"),
        py::arg("model") = CrossSectionModel::constant(), py::arg("root_seed") = 1,
        py::arg("n_workers") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("geometric_time_grid", &geometric_time_grid);

  py::class_<PhaseSpaceGrid>(m, "PhaseSpaceGrid")
      .def(py::init([](double x_min, double x_max, double p_min, double p_max, int nx, int np) {
             return PhaseSpaceGrid{x_min, x_max, p_min, p_max, nx, np};
           }),
           py::arg("x_min"), py::arg("x_max"), py::arg("p_min"), py::arg("p_max"), py::arg("nx"),
           py::arg("np"))
      .def_readonly("x_min", &PhaseSpaceGrid::x_min)
      .def_readonly("x_max", &PhaseSpaceGrid::x_max)
      .def_readonly("p_min", &PhaseSpaceGrid::p_min)
      .def_readonly("p_max", &PhaseSpaceGrid::p_max)
      .def_readonly("nx", &PhaseSpaceGrid::nx)
      .def_readonly("np", &PhaseSpaceGrid::np);
  py::class_<WignerField>(m, "WignerField")
      .def_readonly("grid", &WignerField::grid)
      .def_readonly("w", &WignerField::w)
      .def_readonly("time", &WignerField::time)
      .def("mass", &WignerField::mass);
  m.def("gaussian_wigner", &gaussian_wigner, py::arg("grid"), py::arg("x0"), py::arg("p0"),
        py::arg("var_x"), py::arg("var_p"), py::arg("cov_xp") = 0.0);
  py::class_<FPOptions>(m, "FPOptions")
      .def(py::init<>())
      .def_readwrite("dt", &FPOptions::dt)
      .def_readwrite("free_streaming", &FPOptions::free_streaming);
  m.def("evolve_quantum_fp", &evolve_quantum_fp, py::arg("W0"), py::arg("t_final"),
        py::arg("coeffs"), py::arg("M"), py::arg("opts") = FPOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("evolve_classical_fp", &evolve_classical_fp, py::arg("W0"), py::arg("t_final"),
        py::arg("coeffs"), py::arg("M"), py::arg("opts") = FPOptions{},
        py::call_guard<py::gil_scoped_release>());
  py::class_<PhaseSpaceMoments>(m, "PhaseSpaceMoments")
      .def(py::init<>())
      .def_readwrite("mean_x", &PhaseSpaceMoments::mean_x)
      .def_readwrite("mean_p", &PhaseSpaceMoments::mean_p)
      .def_readwrite("var_x", &PhaseSpaceMoments::var_x)
      .def_readwrite("var_p", &PhaseSpaceMoments::var_p)
      .def_readwrite("cov_xp", &PhaseSpaceMoments::cov_xp);
  m.def("field_moments", &field_moments);
  m.def("gaussian_moment_oracle", &gaussian_moment_oracle, py::arg("initial"), py::arg("t"),
        py::arg("coeffs"), py::arg("M"), py::arg("quantum"), py::arg("free_streaming") = true);

  py::class_<MomentumGrid3D>(m, "MomentumGrid3D")
      .def_readonly("p_max", &MomentumGrid3D::p_max)
      .def_readonly("n", &MomentumGrid3D::n)
      .def("dp", &MomentumGrid3D::dp);
  m.def("make_momentum_grid", &make_momentum_grid, py::arg("params"), py::arg("n") = 15,
        py::arg("p_max") = 0.0);
  py::class_<CoherenceSlice>(m, "CoherenceSlice")
      .def_readonly("grid", &CoherenceSlice::grid)
      .def_readwrite("K", &CoherenceSlice::K)
      .def_readwrite("include_free_phase", &CoherenceSlice::include_free_phase)
      .def_readwrite("values", &CoherenceSlice::values)
      .def_readonly("time", &CoherenceSlice::time)
      .def("trace", &CoherenceSlice::trace)
      .def("l1_norm", &CoherenceSlice::l1_norm);
  m.def("maxwell_slice", &maxwell_slice);
  py::class_<GeneratorOptions>(m, "GeneratorOptions")
      .def(py::init<>())
      .def_readwrite("allow_coarse", &GeneratorOptions::allow_coarse)
      .def_readwrite("n_workers", &GeneratorOptions::n_workers);
  m.def("apply_generator", &apply_generator, py::arg("slice"), py::arg("params"),
        py::arg("model") = CrossSectionModel::constant(),
        py::arg("opts") = GeneratorOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("propagate_slice", &propagate_slice, py::arg("slice"), py::arg("t_final"), py::arg("dt"),
        py::arg("params"), py::arg("model") = CrossSectionModel::constant(),
        py::arg("opts") = GeneratorOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("coherence_decay_rate", &coherence_decay_rate, py::arg("K"), py::arg("params"),
        py::arg("model") = CrossSectionModel::constant(), py::arg("n") = 15,
        py::arg("n_workers") = 0, py::call_guard<py::gil_scoped_release>());
}
