#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lightstore/config.hpp"
#include "lightstore/io.hpp"
#include "lightstore/medium.hpp"
#include "lightstore/polariton.hpp"
#include "lightstore/scenarios.hpp"
#include "lightstore/spectrum.hpp"

namespace py = pybind11;
using namespace lightstore;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(v.size())};
  const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(T))};
  return py::array_t<T>(shape, strides, v.data());
}

std::vector<cdouble> to_vector(const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw ValidationError("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::dict detector_dict(const DetectorSeries& d) {
  py::dict out;
  out["t_us"] = to_array(d.t);
  out["intensity"] = to_array(d.intensity);
  out["control_rabi"] = to_array(d.control);
  out["field"] = to_array(d.field);
  out["input"] = to_array(d.input);
  return out;
}

py::dict snapshot_dict(const FieldState& s) {
  py::dict out;
  out["time_us"] = s.time;
  out["control_rabi"] = s.control;
  out["dz_cm"] = s.dz;
  out["omega_s"] = to_array(s.omega_s);
  out["rho_ep"] = to_array(s.rho_ep);
  out["rho_mp"] = to_array(s.rho_mp);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Light storage in an EIT vapor cell (C++ core)";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<MediumParams>(m, "MediumParams")
      .def(py::init<>())
      .def_readwrite("density", &MediumParams::density)
      .def_readwrite("wavelength", &MediumParams::wavelength)
      .def_readwrite("gamma_r", &MediumParams::gamma_r)
      .def_readwrite("gamma_opt", &MediumParams::gamma_opt)
      .def_readwrite("gamma_0", &MediumParams::gamma_0)
      .def_readwrite("length", &MediumParams::length)
      .def_readwrite("c_light", &MediumParams::c_light)
      .def("validate", &MediumParams::validate)
      .def("__repr__", [](const MediumParams& p) {
        return "MediumParams(density=" + io::format_number(p.density) + ", length=" + io::format_number(p.length) +
               ", gamma_0=" + io::format_number(p.gamma_0) + ")";
      });

  py::class_<DerivedConstants>(m, "DerivedConstants")
      .def_readonly("kappa", &DerivedConstants::kappa)
      .def_readonly("alpha", &DerivedConstants::alpha)
      .def_readonly("alpha_intensity", &DerivedConstants::alpha_intensity)
      .def_readonly("optical_depth", &DerivedConstants::optical_depth);

  m.def("compute_kappa", &compute_kappa, py::arg("medium"));
  m.def("absorption_profile", &absorption_profile, py::arg("medium"));
  m.def("group_velocity", &group_velocity, py::arg("omega_c"), py::arg("kappa"), py::arg("c_light"));
  m.def("control_for_group_velocity", &control_for_group_velocity, py::arg("v_g"), py::arg("kappa"),
        py::arg("c_light"));
  m.def("b_field_to_detuning", &b_field_to_detuning, py::arg("b_mG"));

  m.def(
      "steady_transmission",
      [](const MediumParams& medium, double omega_c, double delta, double Delta) {
        return steady_transmission({delta, Delta, omega_c, medium});
      },
      py::arg("medium"), py::arg("omega_c"), py::arg("delta") = 0.0, py::arg("Delta") = 0.0);
  m.def(
      "transmission_fwhm",
      [](const MediumParams& medium, double omega_c) { return measure_transmission_fwhm({0.0, 0.0, omega_c, medium}); },
      py::arg("medium"), py::arg("omega_c"));
  m.def(
      "calibrate_control_for_fwhm",
      [](const MediumParams& medium, double fwhm) { return calibrate_control_for_fwhm(fwhm, {0.0, 0.0, 0.0, medium}); },
      py::arg("medium"), py::arg("fwhm"));

  py::class_<MixingAngle>(m, "MixingAngle")
      .def_readonly("theta", &MixingAngle::theta)
      .def_readonly("cos", &MixingAngle::cos)
      .def_readonly("sin", &MixingAngle::sin);
  m.def("mixing_angle", &mixing_angle, py::arg("omega_c"), py::arg("kappa"));
  m.def(
      "to_polariton",
      [](const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& omega_s,
         const py::array_t<cdouble, py::array::c_style | py::array::forcecast>& rho_mp, double theta, double kappa) {
        return to_array(to_polariton(to_vector(omega_s), to_vector(rho_mp), theta, kappa));
      },
      py::arg("omega_s"), py::arg("rho_mp"), py::arg("theta"), py::arg("kappa"));

  py::class_<AdiabaticityReport>(m, "AdiabaticityReport")
      .def_readonly("bandwidth", &AdiabaticityReport::bandwidth)
      .def_readonly("window", &AdiabaticityReport::window)
      .def_readonly("ratio", &AdiabaticityReport::ratio)
      .def_readonly("optical_depth", &AdiabaticityReport::optical_depth)
      .def_readonly("pulse_length_cm", &AdiabaticityReport::pulse_length_cm)
      .def_readonly("adiabatic", &AdiabaticityReport::adiabatic)
      .def_readonly("warning", &AdiabaticityReport::warning)
      .def("to_json", [](const AdiabaticityReport& r) { return io::adiabaticity_json(r); });

  m.def("scenario_names", &scenario_names);
  m.def(
      "load_config", [](const std::string& text) { return emit_config(parse_config(text)); }, py::arg("text"),
      "Validate a configuration and return its effective (fully resolved) form.");
  m.def(
      "scenario_config", [](const std::string& name) { return emit_config(config_for_scenario(name)); },
      py::arg("name"), "Effective configuration of a builtin scenario.");

  m.def(
      "run",
      [](const std::string& config_text) {
        const RunConfig config = parse_config(config_text);
        ScenarioOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = run_scenario(config.scenario);
        }
        py::dict out;
        out["name"] = outcome.name;
        out["summary_json"] = io::summary_json(config.scenario, outcome);
        out["adiabaticity"] = outcome.adiabaticity;
        out["warnings"] = outcome.warnings;
        out["control_rabi"] = outcome.initial_control;
        if (outcome.run) {
          out["detector"] = detector_dict(outcome.run->detector);
          py::list snaps;
          for (const auto& s : outcome.run->snapshots) snaps.append(snapshot_dict(s));
          out["snapshots"] = snaps;
          const auto& ob = outcome.run->observables;
          out["transmission"] = ob.transmission;
          out["delay_us"] = ob.delay;
          out["compression_ratio"] = ob.compression_ratio;
          out["retrieval_efficiency"] = ob.retrieval_efficiency;
        } else {
          py::dict spectrum;
          std::vector<double> b, delta, t;
          for (const auto& p : outcome.spectrum) {
            b.push_back(p.b_field_mG);
            delta.push_back(p.delta);
            t.push_back(p.transmission);
          }
          spectrum["b_field_mG"] = to_array(b);
          spectrum["delta_rad_per_us"] = to_array(delta);
          spectrum["transmission"] = to_array(t);
          out["spectrum"] = spectrum;
          out["fwhm_rad_per_us"] = outcome.spectrum_fwhm;
        }
        return out;
      },
      py::arg("config"), "Run a configuration (text) and return detector, snapshots and observables.");

  m.def(
      "sweep",
      [](const std::string& config_text, const std::string& axis, const std::vector<double>& values,
         const std::string& metric, unsigned parallel) {
        const RunConfig config = parse_config(config_text);
        SweepSpec spec{config.scenario.name, axis, values, parse_metric(metric), parallel};
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(config.scenario, spec);
        }
        py::dict out;
        std::vector<double> metrics;
        for (const auto& r : result.rows) metrics.push_back(r.metric);
        out["values"] = values;
        out["metric"] = to_array(metrics);
        out["coherence_time_us"] = result.coherence_time;
        out["r_squared"] = result.fit ? py::cast(result.fit->r_squared) : py::none();
        return out;
      },
      py::arg("config"), py::arg("axis"), py::arg("values"), py::arg("metric") = "efficiency",
      py::arg("parallel") = 1);
}
