#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odmr/constants.hpp"
#include "odmr/dipolar.hpp"
#include "odmr/fit.hpp"
#include "odmr/geometry.hpp"
#include "odmr/lines.hpp"
#include "odmr/spectrum.hpp"
#include "odmr/spin_core.hpp"

namespace py = pybind11;
using namespace odmr;

PYBIND11_MODULE(_odmr, m) {
  m.doc() = "ODMR line, map, fit, dipolar and acoustic toolkit";

  // ---- geometry ----
  py::enum_<Orientation>(m, "Orientation")
      .value("alpha", Orientation::alpha)
      .value("beta", Orientation::beta)
      .value("gamma", Orientation::gamma)
      .value("delta", Orientation::delta);
  m.def("orientation_name", &orientation_name);
  m.def("orientation_from_name", &orientation_from_name);
  m.def("crystal_axis", &crystal_axes::axis,
        "Unit <111> axis of one orientation in cubic coordinates");

  py::class_<FieldConfiguration>(m, "FieldConfiguration")
      .def(py::init<>())
      .def_readwrite("b_main", &FieldConfiguration::b_main)
      .def_readwrite("b_coil1", &FieldConfiguration::b_coil1)
      .def_readwrite("b_coil2", &FieldConfiguration::b_coil2)
      .def_readwrite("theta_mis", &FieldConfiguration::theta_mis)
      .def_readwrite("phi_mis", &FieldConfiguration::phi_mis);

  m.def("lab_to_crystal_matrix", &lab_to_crystal_matrix, py::arg("theta_mis"),
        py::arg("phi_mis"));
  m.def("lab_field_vector", &lab_field_vector);
  m.def("compensate_misalignment", &compensate_misalignment, py::arg("b_main"),
        py::arg("cfg"));

  py::class_<DefectFrameField>(m, "DefectFrameField")
      .def_readonly("b_par", &DefectFrameField::b_par)
      .def_readonly("b_perp", &DefectFrameField::b_perp)
      .def_readonly("psi", &DefectFrameField::psi);
  m.def("defect_frame_field", &defect_frame_field, py::arg("b_crystal"),
        py::arg("axis"));

  // ---- spin core ----
  py::class_<NvParameters>(m, "NvParameters")
      .def(py::init<>())
      .def_readwrite("d_zfs", &NvParameters::d_zfs)
      .def_readwrite("e_strain", &NvParameters::e_strain)
      .def_readwrite("gamma_e", &NvParameters::gamma_e)
      .def("validate", &NvParameters::validate);

  py::class_<P1Parameters>(m, "P1Parameters")
      .def(py::init<>())
      .def_readwrite("gamma_e", &P1Parameters::gamma_e)
      .def_readwrite("gamma_n", &P1Parameters::gamma_n)
      .def_readwrite("quadrupole_q", &P1Parameters::quadrupole_q)
      .def_readwrite("hyperfine_par", &P1Parameters::hyperfine_par)
      .def_readwrite("hyperfine_perp", &P1Parameters::hyperfine_perp)
      .def("validate", &P1Parameters::validate);

  m.def("build_nv_hamiltonian", &build_nv_hamiltonian, py::arg("b_defect"),
        py::arg("params"));
  m.def("build_p1_hamiltonian", &build_p1_hamiltonian, py::arg("b_defect"),
        py::arg("params"));
  m.def("is_hermitian", &is_hermitian, py::arg("h"), py::arg("rel_tol") = 1e-12);
  m.def(
      "eigh",
      [](const ComplexMatrix& h) {
        const auto d = eigh(h);
        return py::make_tuple(d.eigenvalues, d.eigenvectors);
      },
      "Cyclic-Jacobi eigendecomposition -> (eigenvalues, eigenvectors)");

  // ---- lines ----
  py::enum_<LineClass>(m, "LineClass")
      .value("nv_single", LineClass::nv_single)
      .value("nv_multiphoton", LineClass::nv_multiphoton)
      .value("gslac_hyperbola", LineClass::gslac_hyperbola)
      .value("gslac_fraction", LineClass::gslac_fraction)
      .value("flip_flip", LineClass::flip_flip)
      .value("flip_flop", LineClass::flip_flop)
      .value("p1", LineClass::p1)
      .value("acoustic", LineClass::acoustic)
      .value("arc", LineClass::arc);

  py::class_<LineFamily>(m, "LineFamily")
      .def(py::init<>())
      .def_readwrite("cls", &LineFamily::cls)
      .def_readwrite("sub", &LineFamily::sub)
      .def_readwrite("orientation", &LineFamily::orientation)
      .def_readwrite("level_i", &LineFamily::level_i)
      .def_readwrite("level_j", &LineFamily::level_j)
      .def_readwrite("component", &LineFamily::component)
      .def_readwrite("field_T", &LineFamily::field_T)
      .def_readwrite("freq_Hz", &LineFamily::freq_Hz)
      .def_readwrite("weight", &LineFamily::weight)
      .def_readwrite("clamped", &LineFamily::clamped)
      .def("label", &LineFamily::label);

  py::enum_<CoilMode>(m, "CoilMode")
      .value("fixed", CoilMode::fixed)
      .value("compensate_tracking", CoilMode::compensate_tracking)
      .value("compensate_at", CoilMode::compensate_at);

  py::class_<SweepGrid>(m, "SweepGrid")
      .def(py::init<>())
      .def_readwrite("field_start", &SweepGrid::field_start)
      .def_readwrite("field_stop", &SweepGrid::field_stop)
      .def_readwrite("n_field", &SweepGrid::n_field)
      .def_readwrite("cfg", &SweepGrid::cfg)
      .def_readwrite("coil_mode", &SweepGrid::coil_mode)
      .def_readwrite("compensate_field", &SweepGrid::compensate_field)
      .def("fields", &SweepGrid::fields)
      .def("at", &SweepGrid::at)
      .def("validate", &SweepGrid::validate);

  m.def("nv_transitions", &nv_transitions, py::arg("grid"),
        py::arg("orientation"), py::arg("params"));
  m.def("p1_transitions", &p1_transitions, py::arg("grid"),
        py::arg("orientation"), py::arg("params"), py::arg("max_order"));
  m.def("gslac_frequency", &gslac_frequency, py::arg("psi"), py::arg("b"),
        py::arg("params"));
  m.def("gslac_line", &gslac_line, py::arg("grid"), py::arg("psi"),
        py::arg("params"));
  m.def("effective_drive", &effective_drive, py::arg("psi"), py::arg("b"),
        py::arg("omega_la1"), py::arg("params"));
  m.def("flip_flip_line", &flip_flip_line);
  m.def("fractional_lines", &fractional_lines, py::arg("parent"), py::arg("l"));
  m.def("flip_flop_lines", &flip_flop_lines, py::arg("a"), py::arg("b"));
  m.def("bloch_siegert_shift", &bloch_siegert_shift, py::arg("omega_t"),
        py::arg("omega_s1"), py::arg("omega_la"), py::arg("l"),
        py::arg("l_max") = 60);
  m.def("acoustic_comb", &acoustic_comb, py::arg("f_a"), py::arg("n_max"),
        py::arg("grid"));
  m.def("sound_speed", &sound_speed, py::arg("f_a"), py::arg("thickness_m"));
  m.def("arc_family", &arc_family, py::arg("f_arc"), py::arg("b_arc"),
        py::arg("n"), py::arg("b_center"), py::arg("grid"));
  m.def("write_families_csv", &write_families_csv, py::arg("families"),
        py::arg("path"));

  // ---- dipolar ----
  py::class_<EnsembleDensity>(m, "EnsembleDensity")
      .def(py::init<>())
      .def_readwrite("rho", &EnsembleDensity::rho)
      .def_readwrite("spin", &EnsembleDensity::spin);
  m.def("r_eff", &r_eff);
  py::class_<LatticeSumResult>(m, "LatticeSumResult")
      .def_readonly("sum_r6", &LatticeSumResult::sum_r6)
      .def_readonly("stderr", &LatticeSumResult::stderr_);
  m.def("lattice_sum_mc", &lattice_sum_mc, py::arg("density"),
        py::arg("n_defects"), py::arg("seed"), py::arg("n_trials"));
  m.def("local_field_variance", &local_field_variance, py::arg("sum_r6"),
        py::arg("spin"));
  m.def("anderson_ratio", &anderson_ratio, py::arg("variance_t2"),
        py::arg("b_a"));
  py::class_<DipolarReport>(m, "DipolarReport")
      .def_readonly("rho", &DipolarReport::rho)
      .def_readonly("r_eff_m", &DipolarReport::r_eff_m)
      .def_readonly("sum_r6", &DipolarReport::sum_r6)
      .def_readonly("sum_r6_stderr", &DipolarReport::sum_r6_stderr)
      .def_readonly("variance_T2", &DipolarReport::variance_T2)
      .def_readonly("B_a_T", &DipolarReport::B_a_T)
      .def_readonly("R2", &DipolarReport::R2)
      .def_readonly("R2_dB", &DipolarReport::R2_dB);
  m.def("dipolar_chain", &dipolar_chain, py::arg("density"), py::arg("omega_a"),
        py::arg("gamma_e"), py::arg("n_defects"), py::arg("seed"),
        py::arg("n_trials"));

  // ---- spectrum ----
  py::class_<ClassValueMap>(m, "ClassValueMap")
      .def(py::init<>())
      .def_readwrite("default_value", &ClassValueMap::default_value)
      .def_readwrite("by_class", &ClassValueMap::by_class)
      .def("at", &ClassValueMap::at);

  py::class_<OdmrMap>(m, "OdmrMap")
      .def(py::init<>())
      .def_readwrite("field_axis", &OdmrMap::field_axis)
      .def_readwrite("freq_axis", &OdmrMap::freq_axis)
      .def_readwrite("intensity", &OdmrMap::intensity)
      .def("validate", &OdmrMap::validate);

  m.def("synthesize_map_raw", &synthesize_map_raw, py::arg("families"),
        py::arg("field_axis"), py::arg("freq_axis"), py::arg("linewidth_hz"),
        py::arg("amplitude"));
  m.def("synthesize_map", &synthesize_map, py::arg("families"),
        py::arg("field_axis"), py::arg("freq_axis"), py::arg("linewidth_hz"),
        py::arg("amplitude"),
        py::arg("clip_level") = std::numeric_limits<double>::infinity());
  m.def("export_map_csv", &export_map_csv, py::arg("map"), py::arg("path"));
  m.def("import_map_csv", &import_map_csv, py::arg("path"));
  m.def("export_map_pgm", &export_map_pgm, py::arg("map"), py::arg("path"));
  m.def("linspace", &linspace, py::arg("start"), py::arg("stop"), py::arg("n"));

  // ---- fit ----
  py::class_<Peak>(m, "Peak")
      .def(py::init<>())
      .def_readwrite("field_T", &Peak::field_T)
      .def_readwrite("freq_Hz", &Peak::freq_Hz)
      .def_readwrite("amplitude", &Peak::amplitude)
      .def_readwrite("tag", &Peak::tag);

  m.def("extract_peaks", &extract_peaks, py::arg("map"), py::arg("threshold"),
        py::arg("min_separation_bins"));
  m.def(
      "assign_families",
      [](PeakSet peaks, const std::vector<LineFamily>& candidates,
         double tolerance_hz) {
        assign_families(peaks, candidates, tolerance_hz);
        return peaks;
      },
      py::arg("peaks"), py::arg("candidates"), py::arg("tolerance_hz"),
      "Returns a tagged copy of the peak list");

  py::class_<FitModel>(m, "FitModel")
      .def("frequencies", &FitModel::frequencies, py::arg("params"),
           py::arg("field_T"))
      .def("family_labels", &FitModel::family_labels)
      .def("parameter_names", &FitModel::parameter_names);
  py::class_<MisalignmentModel, FitModel>(m, "MisalignmentModel")
      .def(py::init<std::vector<Orientation>, NvParameters,
                    FieldConfiguration>(),
           py::arg("orientations"), py::arg("base"), py::arg("cfg_template"));
  py::class_<GslacModel, FitModel>(m, "GslacModel")
      .def(py::init<NvParameters>(), py::arg("base"));
  py::class_<ArcModel, FitModel>(m, "ArcModel")
      .def(py::init<int>(), py::arg("n_max"));
  py::class_<CombModel, FitModel>(m, "CombModel")
      .def(py::init<int>(), py::arg("n_max"));

  py::class_<FitProblem>(m, "FitProblem")
      .def(py::init<>())
      .def_readwrite("peaks", &FitProblem::peaks)
      // keep the Python-owned model alive as long as the problem exists
      .def_property(
          "model",
          py::cpp_function([](const FitProblem& p) { return p.model; },
                           py::return_value_policy::reference),
          py::cpp_function([](FitProblem& p, const FitModel* m) { p.model = m; },
                           py::keep_alive<1, 2>()))
      .def_readwrite("initial", &FitProblem::initial)
      .def_readwrite("lower", &FitProblem::lower)
      .def_readwrite("upper", &FitProblem::upper)
      .def_readwrite("frozen", &FitProblem::frozen);

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("n_restarts", &FitOptions::n_restarts)
      .def_readwrite("max_iterations", &FitOptions::max_iterations)
      .def_readwrite("simplex_tol", &FitOptions::simplex_tol)
      .def_readwrite("seed", &FitOptions::seed)
      .def_readwrite("n_bootstrap", &FitOptions::n_bootstrap);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("parameters", &FitResult::parameters)
      .def_readonly("residual_rms_hz", &FitResult::residual_rms_hz)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("ci_low", &FitResult::ci_low)
      .def_readonly("ci_high", &FitResult::ci_high)
      .def_readonly("n_peaks", &FitResult::n_peaks);

  m.def("fit_loss", &fit_loss, py::arg("problem"), py::arg("params"));
  m.def("fit_parameters", &fit_parameters, py::arg("problem"),
        py::arg("options") = FitOptions{});

  // ---- constants ----
  m.attr("TWO_PI") = constants::two_pi;
  m.def("deg_to_rad", &constants::deg_to_rad);
  m.def("rad_to_deg", &constants::rad_to_deg);
}
