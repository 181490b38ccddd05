#include "lightstore/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "lightstore/error.hpp"

namespace lightstore {

namespace {

constexpr double kStorageTail = 2.0;   // pulse durations kept after the release transit
constexpr double kConstantTail = 4.0;  // pulse durations kept after the slow-light transit

double kappa_of(const Scenario& s) { return compute_kappa(s.medium); }

double transit_time(const Scenario& s, double omega) {
  const double v = group_velocity(omega, kappa_of(s), s.medium.c_light);
  return v > 0.0 ? s.medium.length / v : 0.0;
}

// Extra delay, relative to steady propagation at omega_on, from one raised-
// cosine ramp between omega_on and zero.
double ramp_lag(const Scenario& s, double omega_on, double ramp) {
  const double kappa = kappa_of(s);
  const double v0 = group_velocity(omega_on, kappa, s.medium.c_light);
  const ControlSchedule down({{0.0, ramp, ControlSegment::Shape::Ramp, omega_on, 0.0}});
  return ramp - down.integrate_group_velocity(0.0, ramp, kappa, s.medium.c_light) / v0;
}

double relative_l2(std::span<const cdouble> a, std::span<const cdouble> b, std::size_t from) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = from; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

ScenarioOutcome run_spectrum(const Scenario& s) {
  ScenarioOutcome out;
  out.name = s.name;
  out.kind = s.kind;
  out.kappa = kappa_of(s);

  SteadyStateInputs in;
  in.medium = s.medium;
  in.Delta = s.detuning.one_photon;
  if (s.spectrum.fwhm_target) {
    out.initial_control = calibrate_control_for_fwhm(*s.spectrum.fwhm_target, in);
  } else if (s.spectrum.omega_c) {
    out.initial_control = *s.spectrum.omega_c;
  } else {
    out.initial_control = s.control.omega_on;
  }
  in.omega_c = out.initial_control;
  out.initial_group_velocity = group_velocity(in.omega_c, out.kappa, s.medium.c_light);

  if (s.spectrum.points < 2 || !(s.spectrum.b_max > s.spectrum.b_min))
    throw ValidationError("spectrum: need points >= 2 and b_max > b_min");
  std::vector<double> scan(s.spectrum.points);
  for (std::size_t i = 0; i < scan.size(); ++i)
    scan[i] = s.spectrum.b_min + (s.spectrum.b_max - s.spectrum.b_min) * static_cast<double>(i) /
                                     static_cast<double>(scan.size() - 1);
  out.spectrum = transmission_spectrum(scan, ScanAxis::BField, in);
  out.spectrum_fwhm = measure_transmission_fwhm(in);
  out.adiabaticity = adiabaticity_report(s.pulse, s.medium, in.omega_c);
  return out;
}

}  // namespace

ControlSchedule ControlSpec::build(double t_end) const {
  switch (mode) {
    case Mode::Constant:
      return ControlSchedule::constant(omega_on, t_end);
    case Mode::Storage:
      return ControlSchedule::storage(omega_on, t_off, ramp, tau, t_end, omega_release.value_or(omega_on));
    case Mode::Segments:
      return ControlSchedule(segments);
  }
  throw ValidationError("unknown control mode");
}

double Scenario::resolved_t_max() const {
  if (grid.t_max > 0.0) return grid.t_max;
  switch (control.mode) {
    case ControlSpec::Mode::Segments:
      if (control.segments.empty()) throw ValidationError("schedule: no segments");
      return control.segments.back().t_end;
    case ControlSpec::Mode::Constant:
      return pulse.center + 1.5 * transit_time(*this, control.omega_on) + kConstantTail * pulse.duration;
    case ControlSpec::Mode::Storage: {
      const double on = control.t_off + 2.0 * control.ramp + control.tau;
      return on + transit_time(*this, control.omega_release.value_or(control.omega_on)) +
             kStorageTail * pulse.duration;
    }
  }
  return grid.t_max;
}

ControlSchedule Scenario::schedule() const { return control.build(resolved_t_max()); }

Grid Scenario::resolved_grid() const {
  Grid g = grid;
  g.t_max = resolved_t_max();
  return g;
}

Scenario default_scenario() {
  Scenario s;
  s.medium = MediumParams{};
  s.pulse = SignalPulseSpec{};
  s.control.omega_on = control_for_group_velocity(0.1, compute_kappa(s.medium), s.medium.c_light);
  s.control.ramp = 3.0;
  s.grid = Grid{512, 0.01, 0.0};
  return s;
}

std::vector<std::string> scenario_names() {
  return {"spectrum-fig1b", "slow-light",    "storage-50us", "storage-100us",
          "storage-200us",  "storage-ideal", "cw-eit-weak",  "vacuum"};
}

Scenario builtin_scenario(std::string_view name) {
  Scenario s = default_scenario();
  s.name = std::string(name);

  if (name == "spectrum-fig1b") {
    s.description = "cw transmission vs magnetic field, control calibrated to a 15 kHz resonance";
    s.kind = Scenario::Kind::Spectrum;
    s.spectrum.fwhm_target = units::khz_to_rate(15.0);
    return s;
  }
  if (name == "slow-light") {
    s.description = "constant control at v_g = 1 km/s; delay and compression against vacuum";
    s.control.mode = ControlSpec::Mode::Constant;
    s.snapshot_times = {s.pulse.center + 0.5 * transit_time(s, s.control.omega_on)};
    s.oracle.kind = OracleSpec::Kind::VacuumReference;
    return s;
  }
  if (name == "storage-50us" || name == "storage-100us" || name == "storage-200us") {
    s.control.mode = ControlSpec::Mode::Storage;
    s.control.tau = name == "storage-50us" ? 50.0 : name == "storage-100us" ? 100.0 : 200.0;
    s.description = "store, hold " + std::to_string(static_cast<int>(s.control.tau)) +
                    " us with 150 us coherence decay, release";
    return s;
  }
  if (name == "storage-ideal") {
    s.description = "lossless storage (gamma_0 = 0, gamma_opt = gamma_r) checked against the polariton analytics";
    s.medium.gamma_0 = 0.0;
    s.medium.gamma_opt = s.medium.gamma_r;
    s.control.mode = ControlSpec::Mode::Storage;
    s.control.t_off = 60.0;
    s.control.tau = 50.0;
    const double t2 = s.control.t_off + s.control.ramp + s.control.tau;
    s.snapshot_times = {s.control.t_off, t2 + s.control.ramp};
    s.oracle.kind = OracleSpec::Kind::Polariton;
    return s;
  }
  if (name == "cw-eit-weak") {
    s.description = "cw control at 1/5 of the dynamic intensity; compared with dynamic storage of equal delay";
    const double dynamic = s.control.omega_on;
    s.control.mode = ControlSpec::Mode::Constant;
    s.control.omega_on = dynamic / std::sqrt(5.0);
    s.oracle.kind = OracleSpec::Kind::MatchedStorage;
    s.oracle.omega_on = dynamic;
    s.oracle.t_off = 67.0;
    s.oracle.ramp = 3.0;
    return s;
  }
  if (name == "vacuum") {
    s.description = "empty cell (n = 0) reference";
    s.medium.density = 0.0;
    s.control.mode = ControlSpec::Mode::Constant;
    return s;
  }
  throw ValidationError("unknown scenario '" + std::string(name) + "'");
}

ScenarioOutcome run_scenario(const Scenario& s) {
  if (s.kind == Scenario::Kind::Spectrum) return run_spectrum(s);

  ScenarioOutcome out;
  out.name = s.name;
  out.kind = s.kind;
  out.kappa = kappa_of(s);

  const Grid grid = s.resolved_grid();
  const ControlSchedule schedule = s.control.build(grid.t_max);
  out.initial_control = schedule(s.pulse.center);
  out.initial_group_velocity = group_velocity(out.initial_control, out.kappa, s.medium.c_light);
  out.adiabaticity = adiabaticity_report(s.pulse, s.medium, out.initial_control);

  SolverOptions options;
  options.decay_on = s.decay_on;
  options.detuning = s.detuning;
  options.snapshot_times = s.snapshot_times;
  out.run = evolve(s.medium, schedule, s.pulse, grid, options);
  auto& run = *out.run;
  out.warnings = run.warnings;

  if (!run.snapshots.empty() && s.pulse.shape == SignalPulseSpec::Shape::Gaussian) {
    try {
      run.observables.compression_ratio =
          measure_compression(run.snapshots.front(), s.pulse.duration, out.kappa, s.medium.c_light);
    } catch (const ContainmentError& e) {
      out.warnings.emplace_back(e.what());
    } catch (const NoSignalError& e) {
      out.warnings.emplace_back(e.what());
    }
  }

  switch (s.oracle.kind) {
    case OracleSpec::Kind::None:
      break;
    case OracleSpec::Kind::VacuumReference: {
      MediumParams vacuum = s.medium;
      vacuum.density = 0.0;
      out.reference = evolve(vacuum, schedule, s.pulse, grid, SolverOptions{s.decay_on, s.detuning, {}});
      run.observables.delay = measure_delay(run, *out.reference);
      OracleComparison c;
      c.kind = s.oracle.kind;
      out.comparison = c;
      break;
    }
    case OracleSpec::Kind::Polariton: {
      OracleComparison c;
      c.kind = s.oracle.kind;
      const auto stored = stored_coherence(s.pulse, schedule, s.medium);
      const auto released = released_field(stored.rho, schedule, s.medium, s.detuning, run.detector.t, s.decay_on);
      c.analytic = released.omega_s;
      c.stored_fraction = stored.stored_fraction;
      c.truncated = stored.truncated;
      if (released.empty) out.warnings.push_back(released.warning);
      if (stored.truncated) out.warnings.emplace_back("stored image truncated at a cell boundary");
      const auto st = schedule.storage_times();
      const auto from = static_cast<std::size_t>(std::ceil(*st->t2 / grid.dt));
      c.relative_l2_error = relative_l2(run.detector.field, c.analytic, from);
      out.comparison = std::move(c);
      break;
    }
    case OracleSpec::Kind::MatchedStorage: {
      OracleComparison c;
      c.kind = s.oracle.kind;
      Scenario dyn = s;
      dyn.control.mode = ControlSpec::Mode::Storage;
      dyn.control.omega_on = s.oracle.omega_on;
      dyn.control.omega_release.reset();
      dyn.control.t_off = s.oracle.t_off;
      dyn.control.ramp = s.oracle.ramp;
      dyn.control.tau = transit_time(s, out.initial_control) - transit_time(s, s.oracle.omega_on) -
                        2.0 * ramp_lag(s, s.oracle.omega_on, s.oracle.ramp);
      if (!(dyn.control.tau >= 0.0))
        throw ValidationError("matched storage: cw delay is shorter than the dynamic transit");
      dyn.grid.t_max = 0.0;
      dyn.snapshot_times.clear();
      const Grid dgrid = dyn.resolved_grid();
      out.reference = evolve(dyn.medium, dyn.control.build(dgrid.t_max), dyn.pulse, dgrid,
                             SolverOptions{s.decay_on, s.detuning, {}});
      c.matched_tau = dyn.control.tau;
      const double released = out.reference->observables.peak_II_energy;
      c.energy_ratio = released > 0.0 ? run.observables.output_energy / released : 0.0;
      out.comparison = c;
      break;
    }
  }
  return out;
}

std::vector<std::string> sweep_axes() {
  return {"medium.density", "medium.gamma_0",  "medium.gamma_opt", "medium.length",
          "medium.b_field", "schedule.omega_on", "schedule.tau",   "schedule.t_off",
          "schedule.ramp",  "pulse.duration",  "pulse.amplitude",  "pulse.center",
          "grid.nz",        "grid.dt"};
}

void apply_parameter(Scenario& s, std::string_view path, double value) {
  static const std::map<std::string, std::function<void(Scenario&, double)>, std::less<>> setters = {
      {"medium.density", [](Scenario& x, double v) { x.medium.density = v; }},
      {"medium.gamma_0", [](Scenario& x, double v) { x.medium.gamma_0 = v; }},
      {"medium.gamma_opt", [](Scenario& x, double v) { x.medium.gamma_opt = v; }},
      {"medium.length", [](Scenario& x, double v) { x.medium.length = v; }},
      {"medium.b_field", [](Scenario& x, double v) { x.detuning.two_photon = b_field_to_detuning(v); }},
      {"schedule.omega_on", [](Scenario& x, double v) { x.control.omega_on = v; }},
      {"schedule.tau", [](Scenario& x, double v) { x.control.tau = v; }},
      {"schedule.t_off", [](Scenario& x, double v) { x.control.t_off = v; }},
      {"schedule.ramp", [](Scenario& x, double v) { x.control.ramp = v; }},
      {"pulse.duration", [](Scenario& x, double v) { x.pulse.duration = v; }},
      {"pulse.amplitude", [](Scenario& x, double v) { x.pulse.amplitude = v; }},
      {"pulse.center", [](Scenario& x, double v) { x.pulse.center = v; }},
      {"grid.nz", [](Scenario& x, double v) {
         if (!(v >= 1.0) || v != std::floor(v)) throw ValidationError("grid.nz: must be a positive integer");
         x.grid.nz = static_cast<std::size_t>(v);
       }},
      {"grid.dt", [](Scenario& x, double v) { x.grid.dt = v; }},
  };
  const auto it = setters.find(path);
  if (it == setters.end()) throw ValidationError("unknown sweep axis '" + std::string(path) + "'");
  if (!std::isfinite(value)) throw ValidationError("sweep value for " + std::string(path) + " is not finite");
  it->second(s, value);
}

std::string_view to_string(SweepMetric metric) {
  switch (metric) {
    case SweepMetric::Efficiency: return "efficiency";
    case SweepMetric::Delay: return "delay";
    case SweepMetric::Width: return "width";
  }
  return "efficiency";
}

SweepMetric parse_metric(std::string_view text) {
  if (text == "efficiency") return SweepMetric::Efficiency;
  if (text == "delay") return SweepMetric::Delay;
  if (text == "width") return SweepMetric::Width;
  throw ValidationError("unknown sweep metric '" + std::string(text) + "'");
}

namespace {

double evaluate_metric(const Scenario& s, SweepMetric metric) {
  Scenario point = s;
  point.snapshot_times.clear();
  if (metric == SweepMetric::Delay) point.oracle.kind = OracleSpec::Kind::VacuumReference;
  else if (point.oracle.kind != OracleSpec::Kind::Polariton) point.oracle.kind = OracleSpec::Kind::None;
  const auto outcome = run_scenario(point);
  const auto& run = *outcome.run;
  switch (metric) {
    case SweepMetric::Efficiency:
      return run.observables.retrieval_efficiency.value_or(run.observables.transmission);
    case SweepMetric::Delay:
      return *run.observables.delay;
    case SweepMetric::Width: {
      std::size_t from = 0;
      if (run.storage && run.storage->t2)
        from = static_cast<std::size_t>(std::ceil(*run.storage->t2 / run.detector.dt));
      from = std::min(from, run.detector.size());
      return numeric::fwhm(std::span(run.detector.intensity).subspan(from), run.detector.dt);
    }
  }
  return 0.0;
}

}  // namespace

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec) {
  if (spec.values.empty()) throw ValidationError("sweep: no values");
  if (base.kind != Scenario::Kind::Propagation) throw ValidationError("sweep: scenario must run the solver");
  {
    Scenario probe = base;
    apply_parameter(probe, spec.axis, spec.values.front());
  }

  SweepResult result;
  result.axis = spec.axis;
  result.metric = spec.metric;
  result.rows.resize(spec.values.size());

  std::vector<std::exception_ptr> errors(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.values.size(); i = next++) {
      try {
        Scenario point = base;
        apply_parameter(point, spec.axis, spec.values[i]);
        result.rows[i] = {spec.values[i], evaluate_metric(point, spec.metric)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::clamp<unsigned>(spec.parallel, 1u, static_cast<unsigned>(spec.values.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "sweep " + spec.axis + " = " + std::to_string(spec.values[i]) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what(), e.step());
    } catch (const std::exception& e) {
      throw NumericalError(where + e.what());
    }
  }

  if (spec.axis == "schedule.tau" && spec.metric == SweepMetric::Efficiency) {
    std::vector<double> x, y;
    for (const auto& r : result.rows)
      if (r.value >= 2.0 * base.control.ramp && r.metric > 0.0) {
        x.push_back(r.value);
        y.push_back(std::log(r.metric));
      }
    if (x.size() >= 2) {
      result.fit = numeric::fit_line(x, y);
      if (result.fit->slope < 0.0) result.coherence_time = -2.0 / result.fit->slope;
      result.fit_description = "ln(efficiency) vs tau [us], tau >= 2 ramp; coherence time = -2/slope";
    }
  } else if (spec.axis == "schedule.omega_on" && spec.metric == SweepMetric::Delay) {
    std::vector<double> x, y;
    for (const auto& r : result.rows) {
      x.push_back(1.0 / (r.value * r.value));
      y.push_back(r.metric);
    }
    if (x.size() >= 2) {
      result.fit = numeric::fit_line(x, y);
      result.fit_description = "delay [us] vs 1/omega_on^2 [us^2]";
    }
  }
  return result;
}

SweepResult run_sweep(const SweepSpec& spec) { return run_sweep(builtin_scenario(spec.scenario), spec); }

}  // namespace lightstore
