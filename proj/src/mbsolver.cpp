#include "lightstore/mbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lightstore/error.hpp"
#include "lightstore/numeric.hpp"
#include "lightstore/polariton.hpp"

namespace lightstore {

namespace {

constexpr cdouble kI{0.0, 1.0};

// Exact propagator of the two atomic coherences over one step with the
// control frozen at the step midpoint and the drive linear within the step:
//   rho(n+1) = E rho(n) + P Omega_s(n) + Q Omega_s(n+1).
struct StepPropagator {
  cdouble e00, e01, e10, e11;
  cdouble p0, p1;
  cdouble q0, q1;
};

StepPropagator make_propagator(double omega_c, double gamma_opt, double Delta, double gamma_0,
                               double delta, double dt) {
  // Augmented state (rho_ep, rho_mp, w, slope): w' = slope / dt, rho_ep' += i w.
  Eigen::Matrix<cdouble, 4, 4> b = Eigen::Matrix<cdouble, 4, 4>::Zero();
  b(0, 0) = -cdouble(gamma_opt, Delta) * dt;
  b(0, 1) = kI * omega_c * dt;
  b(1, 0) = kI * omega_c * dt;
  b(1, 1) = -cdouble(gamma_0, delta) * dt;
  b(0, 2) = kI * dt;
  b(2, 3) = 1.0;
  const Eigen::Matrix<cdouble, 4, 4> m = b.exp();

  StepPropagator p;
  p.e00 = m(0, 0);
  p.e01 = m(0, 1);
  p.e10 = m(1, 0);
  p.e11 = m(1, 1);
  p.q0 = m(0, 3);
  p.q1 = m(1, 3);
  p.p0 = m(0, 2) - p.q0;
  p.p1 = m(1, 2) - p.q1;
  return p;
}

bool finite(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void weak_probe_guard(const ControlSchedule& schedule, const SignalPulseSpec& pulse,
                      std::vector<std::string>& warnings) {
  if (pulse.shape != SignalPulseSpec::Shape::Gaussian || pulse.amplitude == 0.0) return;
  double hi = pulse.center + 2.0 * pulse.duration;
  if (auto st = schedule.storage_times()) hi = std::min(hi, st->t0);
  const double lo = std::max(0.0, pulse.center - 2.0 * pulse.duration);
  double min_control = schedule(lo);
  for (int k = 1; k <= 64 && hi > lo; ++k) min_control = std::min(min_control, schedule(lo + (hi - lo) * k / 64.0));
  if (pulse.amplitude > 0.1 * min_control)
    warnings.push_back("weak-probe guard: pulse amplitude exceeds 0.1 of the control field");
}

void compute_observables(RunResult& r) {
  const auto& d = r.detector;
  const double dt = d.dt;
  std::vector<double> in_int(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) in_int[n] = std::norm(d.input[n]);

  auto& o = r.observables;
  o.input_energy = numeric::trapezoid(in_int, dt);
  o.output_energy = numeric::trapezoid(d.intensity, dt);
  o.transmission = o.input_energy > 0.0 ? o.output_energy / o.input_energy : 0.0;
  const double out_peak = d.intensity.empty() ? 0.0 : *std::max_element(d.intensity.begin(), d.intensity.end());
  o.output_centroid = out_peak > 0.0 ? numeric::centroid(d.intensity, 0.0, dt) : 0.0;

  if (!r.storage) return;
  const auto last = d.size() - 1;
  const auto i1 = std::min(last, static_cast<std::size_t>(std::floor(r.storage->t1 / dt)));
  o.peak_I_energy = numeric::trapezoid(d.intensity, dt, 0, i1 + 1);
  for (std::size_t n = 0; n <= i1; ++n) o.peak_I_amplitude = std::max(o.peak_I_amplitude, std::abs(d.field[n]));
  if (r.storage->t2) {
    const auto i2 = std::min(last, static_cast<std::size_t>(std::ceil(*r.storage->t2 / dt)));
    o.peak_II_energy = numeric::trapezoid(d.intensity, dt, i2, d.size());
    for (std::size_t n = i2; n <= last; ++n) o.peak_II_amplitude = std::max(o.peak_II_amplitude, std::abs(d.field[n]));
  }
  if (!r.storage->t2) {
    r.warnings.push_back("control never switched back on; nothing released");
    return;
  }
  const auto eff = measure_retrieval_efficiency(r);
  o.retrieval_efficiency = eff.efficiency;
  if (eff.no_release) r.warnings.push_back("no peak II above threshold; efficiency reported as 0");
}

}  // namespace

std::size_t Grid::steps() const {
  return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

void check_resolution(const MediumParams& medium, const ControlSchedule& schedule,
                      const SignalPulseSpec& pulse, const Grid& grid) {
  if (grid.nz < 64) throw ValidationError("grid.nz: need at least 64 points");
  if (!std::isfinite(grid.dt) || !(grid.dt > 0.0)) throw ValidationError("grid.dt: must be > 0");
  if (!std::isfinite(grid.t_max) || !(grid.t_max > 0.0)) throw ValidationError("grid.t_max: must be > 0");
  if (grid.t_max / grid.dt > 2e8) throw ValidationError("grid: more than 2e8 time steps");
  if (grid.dt > pulse.duration / 20.0)
    throw ValidationError("grid.dt: must resolve the pulse (dt <= duration / 20)");
  for (const auto& s : schedule.segments())
    if (s.shape == ControlSegment::Shape::Ramp && grid.dt > (s.t_end - s.t_start) / 10.0)
      throw ValidationError("grid.dt: must resolve control ramps (dt <= ramp / 10)");

  const double kappa = compute_kappa(medium);
  const double control = schedule(pulse.center);
  if (pulse.shape == SignalPulseSpec::Shape::Gaussian && kappa > 0.0 && control > 0.0) {
    const double length_in_medium = group_velocity(control, kappa, medium.c_light) * pulse.duration;
    if (grid.dz(medium.length) > length_in_medium / 10.0)
      throw ValidationError("grid.nz: dz must resolve the compressed pulse (dz <= v_g T / 10)");
  }
}

RunResult evolve(const MediumParams& medium, const ControlSchedule& schedule,
                 const SignalPulseSpec& pulse, const Grid& grid, const SolverOptions& options) {
  medium.validate();
  pulse.validate();
  check_resolution(medium, schedule, pulse, grid);

  const double kappa = compute_kappa(medium);
  const std::size_t nz = grid.nz;
  const std::size_t nt = grid.steps();
  const double dt = grid.dt;
  const double dz = grid.dz(medium.length);
  const double gamma_0 = options.decay_on ? medium.gamma_0 : 0.0;
  const cdouble h = kI * (kappa / medium.c_light) * (0.5 * dz);

  RunResult result;
  result.storage = schedule.storage_times();
  weak_probe_guard(schedule, pulse, result.warnings);

  // Snapshot requests keyed by the nearest step.
  std::multimap<std::size_t, double> snapshot_at;
  for (double ts : options.snapshot_times) {
    if (!(ts >= 0.0) || ts > static_cast<double>(nt) * dt + 0.5 * dt)
      throw ValidationError("snapshot time outside the run window");
    snapshot_at.emplace(static_cast<std::size_t>(std::llround(ts / dt)), ts);
  }

  std::vector<cdouble> om(nz, 0.0);
  om[0] = pulse(0.0);
  std::vector<cdouble> re(nz, 0.0);
  std::vector<cdouble> rm(nz, 0.0);

  auto& det = result.detector;
  det.dt = dt;
  det.t.reserve(nt + 1);
  det.field.reserve(nt + 1);
  det.input.reserve(nt + 1);
  det.intensity.reserve(nt + 1);
  det.control.reserve(nt + 1);

  auto record = [&](std::size_t n) {
    const double t = static_cast<double>(n) * dt;
    det.t.push_back(t);
    det.field.push_back(om[nz - 1]);
    det.input.push_back(om[0]);
    det.intensity.push_back(std::norm(om[nz - 1]));
    det.control.push_back(schedule(t));
    for (auto [it, end] = snapshot_at.equal_range(n); it != end; ++it) {
      FieldState s;
      s.time = t;
      s.control = schedule(t);
      s.dz = dz;
      s.omega_s = om;
      s.rho_ep = re;
      s.rho_mp = rm;
      result.snapshots.push_back(std::move(s));
    }
  };
  record(0);

  double cached_control = -1.0;
  StepPropagator p{};
  cdouble inv{};

  for (std::size_t n = 0; n < nt; ++n) {
    const double t_mid = (static_cast<double>(n) + 0.5) * dt;
    const double control = schedule(t_mid);
    if (control != cached_control) {
      p = make_propagator(control, medium.gamma_opt, options.detuning.one_photon, gamma_0,
                          options.detuning.two_photon, dt);
      inv = 1.0 / (1.0 - h * p.q0);
      cached_control = control;
    }

    const cdouble s_new = pulse(static_cast<double>(n + 1) * dt);
    {
      const cdouble r_e = p.e00 * re[0] + p.e01 * rm[0] + p.p0 * om[0];
      const cdouble r_m = p.e10 * re[0] + p.e11 * rm[0] + p.p1 * om[0];
      om[0] = s_new;
      re[0] = r_e + p.q0 * s_new;
      rm[0] = r_m + p.q1 * s_new;
    }
    for (std::size_t j = 1; j < nz; ++j) {
      const cdouble r_e = p.e00 * re[j] + p.e01 * rm[j] + p.p0 * om[j];
      const cdouble r_m = p.e10 * re[j] + p.e11 * rm[j] + p.p1 * om[j];
      const cdouble field = (om[j - 1] + h * (re[j - 1] + r_e)) * inv;
      om[j] = field;
      re[j] = r_e + p.q0 * field;
      rm[j] = r_m + p.q1 * field;
    }

    if (!finite(om[nz - 1]))
      throw NumericalError("non-finite detector field at step " + std::to_string(n + 1), n + 1);
    if ((n & 255u) == 255u || n + 1 == nt) {
      for (std::size_t j = 0; j < nz; ++j) {
        if (!finite(om[j]) || !finite(re[j]) || !finite(rm[j]))
          throw NumericalError("non-finite field at step " + std::to_string(n + 1), n + 1);
        if (std::abs(re[j]) > 1.0 || std::abs(rm[j]) > 1.0)
          throw NumericalError("coherence magnitude above 1 at step " + std::to_string(n + 1) +
                                   " (weak-probe model violated)",
                               n + 1);
      }
    }
    record(n + 1);
  }

  compute_observables(result);
  return result;
}

double measure_delay(const RunResult& result, const RunResult& reference) {
  auto check = [](const RunResult& r) {
    const auto& in = r.detector.input;
    double in_peak = 0.0;
    for (auto v : in) in_peak = std::max(in_peak, std::norm(v));
    const double out_peak = r.detector.intensity.empty()
                                ? 0.0
                                : *std::max_element(r.detector.intensity.begin(), r.detector.intensity.end());
    if (!(out_peak > 1e-12 * in_peak) || !(out_peak > 0.0))
      throw NoSignalError("measure_delay: no detector peak above 1e-12 of the input peak");
  };
  check(result);
  check(reference);
  return result.observables.output_centroid - reference.observables.output_centroid;
}

double polariton_number(const FieldState& snapshot, double kappa) {
  const auto angle = mixing_angle(snapshot.control, kappa);
  const auto psi = to_polariton(snapshot.omega_s, snapshot.rho_mp, angle.theta, kappa);
  std::vector<double> density(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) density[i] = std::norm(psi[i]);
  return numeric::trapezoid(density, snapshot.dz);
}

double measure_compression(const FieldState& snapshot, double pulse_duration, double kappa,
                           double c_light) {
  const auto angle = mixing_angle(snapshot.control, kappa);
  const auto psi = to_polariton(snapshot.omega_s, snapshot.rho_mp, angle.theta, kappa);
  std::vector<double> density(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) density[i] = std::norm(psi[i]);
  const double peak = *std::max_element(density.begin(), density.end());
  if (!(peak > 0.0)) throw NoSignalError("measure_compression: empty snapshot");
  if (density.front() > 0.1 * peak || density.back() > 0.1 * peak)
    throw ContainmentError("measure_compression: pulse not contained in the cell");
  const double width = numeric::fwhm(density, snapshot.dz);
  if (!(width > 0.0)) throw ContainmentError("measure_compression: no resolvable FWHM");
  return c_light * pulse_duration / width;
}

EfficiencyMeasurement measure_retrieval_efficiency(const RunResult& result) {
  if (!result.storage || !result.storage->t2)
    throw ValidationError("measure_retrieval_efficiency: run has no storage protocol");
  const auto& o = result.observables;
  double in_peak = 0.0;
  for (auto v : result.detector.input) in_peak = std::max(in_peak, std::norm(v));

  EfficiencyMeasurement m;
  const double available = o.input_energy - o.peak_I_energy;
  if (!(o.peak_II_amplitude * o.peak_II_amplitude > 1e-12 * in_peak) || !(available > 0.0)) {
    m.no_release = true;
    return m;
  }
  m.efficiency = o.peak_II_energy / available;
  return m;
}

}  // namespace lightstore
