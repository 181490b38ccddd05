#include "lightstore/polariton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lightstore/error.hpp"
#include "lightstore/numeric.hpp"
#include "lightstore/spectrum.hpp"

namespace lightstore {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* op) {
  if (a != b) throw ValidationError(std::string(op) + ": fields are on different grids");
}

double input_energy(const std::function<cdouble(double)>& input, double t_end) {
  return numeric::integrate([&](double t) { return std::norm(input(t)); }, 0.0, t_end, 4096);
}

}  // namespace

MixingAngle mixing_angle(double omega_c, double kappa) {
  if (!(omega_c >= 0.0) || !(kappa >= 0.0))
    throw ValidationError("mixing_angle: need omega_c >= 0 and kappa >= 0");
  MixingAngle a;
  const double root = std::sqrt(kappa);
  a.theta = std::atan2(root, omega_c);
  const double norm = std::hypot(omega_c, root);
  if (norm > 0.0) {
    a.cos = omega_c / norm;
    a.sin = root / norm;
  }
  return a;
}

std::vector<cdouble> to_polariton(std::span<const cdouble> omega_s, std::span<const cdouble> rho_mp,
                                  double theta, double kappa) {
  require_same_size(omega_s.size(), rho_mp.size(), "to_polariton");
  const double c = std::cos(theta);
  const double s = std::sin(theta) * std::sqrt(kappa);
  std::vector<cdouble> psi(omega_s.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = c * omega_s[i] - s * rho_mp[i];
  return psi;
}

std::vector<cdouble> to_bright(std::span<const cdouble> omega_s, std::span<const cdouble> rho_mp,
                               double theta, double kappa) {
  require_same_size(omega_s.size(), rho_mp.size(), "to_bright");
  const double s = std::sin(theta);
  const double c = std::cos(theta) * std::sqrt(kappa);
  std::vector<cdouble> phi(omega_s.size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = s * omega_s[i] + c * rho_mp[i];
  return phi;
}

FieldPair from_polariton(std::span<const cdouble> psi, std::span<const cdouble> bright,
                         double theta, double kappa) {
  require_same_size(psi.size(), bright.size(), "from_polariton");
  if (!(kappa > 0.0)) throw ValidationError("from_polariton: kappa must be > 0");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double root = std::sqrt(kappa);
  FieldPair out;
  out.omega_s.resize(psi.size());
  out.rho_mp.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out.omega_s[i] = c * psi[i] + s * bright[i];
    out.rho_mp[i] = (c * bright[i] - s * psi[i]) / root;
  }
  return out;
}

cdouble Profile::at(double z) const { return numeric::interpolate_cubic(values, z0, dz, z); }

double Profile::norm() const {
  std::vector<double> d(values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(values[i]);
  return numeric::trapezoid(d, dz);
}

std::vector<Profile> ideal_propagate(const Profile& psi0, const ControlSchedule& schedule,
                                     const MediumParams& medium, double t_start,
                                     std::span<const double> times, double z_lo, double z_hi) {
  if (psi0.values.size() < 2 || !(psi0.dz > 0.0)) throw ValidationError("ideal_propagate: empty profile");
  if (!(z_hi > z_lo)) throw ValidationError("ideal_propagate: empty output domain");
  const double kappa = compute_kappa(medium);
  const auto n = static_cast<std::size_t>(std::llround((z_hi - z_lo) / psi0.dz)) + 1;

  std::vector<Profile> out;
  out.reserve(times.size());
  for (double t : times) {
    const double shift = schedule.integrate_group_velocity(t_start, t, kappa, medium.c_light);
    Profile p;
    p.z0 = z_lo;
    p.dz = psi0.dz;
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.values[i] = psi0.at(p.position(i) - shift);
    out.push_back(std::move(p));
  }
  return out;
}

StoredCoherence stored_coherence(const std::function<cdouble(double)>& input,
                                 const ControlSchedule& schedule, const MediumParams& medium,
                                 std::size_t nz) {
  const auto st = schedule.storage_times();
  if (!st) throw ValidationError("stored_coherence: schedule never switches the control off");
  if (nz < 2) throw ValidationError("stored_coherence: need at least 2 samples");
  const double kappa = compute_kappa(medium);
  if (!(kappa > 0.0)) throw ValidationError("stored_coherence: kappa must be > 0");

  StoredCoherence sc;
  sc.v_g0 = group_velocity(schedule(st->t0), kappa, medium.c_light);
  if (!(sc.v_g0 > 0.0)) throw ValidationError("stored_coherence: v_g0 = 0 before switch-off");
  const double travelled = schedule.integrate_group_velocity(st->t0, st->t1, kappa, medium.c_light);
  const double scale = std::sqrt(medium.c_light / (sc.v_g0 * kappa));

  sc.rho.z0 = 0.0;
  sc.rho.dz = medium.length / static_cast<double>(nz - 1);
  sc.rho.values.resize(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    const double z = sc.rho.position(i);
    sc.rho.values[i] = -scale * input(st->t0 + (travelled - z) / sc.v_g0);
  }

  const double energy_in = input_energy(input, schedule.t_end());
  sc.stored_fraction = energy_in > 0.0 ? (kappa / medium.c_light) * sc.rho.norm() / energy_in : 0.0;

  double peak = 0.0;
  for (auto v : sc.rho.values) peak = std::max(peak, std::norm(v));
  sc.truncated = peak > 0.0 && (std::norm(sc.rho.values.front()) > 1e-3 * peak ||
                                std::norm(sc.rho.values.back()) > 1e-3 * peak);
  return sc;
}

StoredCoherence stored_coherence(const SignalPulseSpec& input, const ControlSchedule& schedule,
                                 const MediumParams& medium, std::size_t nz) {
  input.validate();
  return stored_coherence([&](double t) { return input(t); }, schedule, medium, nz);
}

ReleasedField released_field(const Profile& rho_stored, const ControlSchedule& schedule,
                             const MediumParams& medium, const Detuning& detuning,
                             std::span<const double> times, bool decay_on) {
  ReleasedField out;
  out.t.assign(times.begin(), times.end());
  out.omega_s.assign(times.size(), 0.0);

  const auto st = schedule.storage_times();
  if (!st || !st->t2) {
    out.empty = true;
    out.warning = "control is never switched back on; nothing is released";
    return out;
  }
  const double t2 = *st->t2;
  const double kappa = compute_kappa(medium);
  const double root = std::sqrt(kappa);
  const double gamma_0 = decay_on ? medium.gamma_0 : 0.0;
  const cdouble factor = std::exp(-cdouble(gamma_0, detuning.two_photon) * st->tau());
  const double exit = medium.length;

  bool any_on = false;
  double last_t = t2;
  double shift = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < t2) continue;
    if (t >= last_t) {
      shift += schedule.integrate_group_velocity(last_t, t, kappa, medium.c_light);
    } else {
      shift = schedule.integrate_group_velocity(t2, t, kappa, medium.c_light);
    }
    last_t = t;

    const auto angle = mixing_angle(schedule(t), kappa);
    if (angle.cos > 0.0) any_on = true;
    const double zq = exit - shift;
    if (zq < rho_stored.z0 || zq > rho_stored.z_end()) continue;
    out.omega_s[k] = -angle.cos * root * factor * rho_stored.at(zq);
  }
  if (!any_on) {
    out.empty = true;
    out.warning = "control stays off after t2; nothing is released";
  }
  return out;
}

double gaussian_bandwidth(double duration) {
  if (!(duration > 0.0)) throw ValidationError("gaussian_bandwidth: duration must be > 0");
  return 4.0 * std::numbers::ln2 / duration;
}

AdiabaticityReport adiabaticity_report(const SignalPulseSpec& pulse, const MediumParams& medium,
                                       double omega_c_initial) {
  pulse.validate();
  const auto d = absorption_profile(medium);
  AdiabaticityReport r;
  r.bandwidth = pulse.shape == SignalPulseSpec::Shape::Gaussian ? gaussian_bandwidth(pulse.duration) : 0.0;
  r.optical_depth = d.optical_depth;
  r.propagation_distance_cm = medium.length;
  r.absorption_length_cm = d.alpha > 0.0 ? 1.0 / d.alpha : std::numeric_limits<double>::infinity();
  const double v0 = group_velocity(omega_c_initial, d.kappa, medium.c_light);
  r.pulse_length_cm = v0 * pulse.duration;
  r.window = d.optical_depth > 0.0 ? transparency_window(omega_c_initial, medium.gamma_opt, d.optical_depth)
                                   : std::numeric_limits<double>::infinity();
  r.ratio = r.window > 0.0 ? r.bandwidth / r.window : std::numeric_limits<double>::infinity();
  r.adiabatic = r.ratio < 1.0;
  r.warning = r.ratio >= 0.5 && r.ratio <= 1.0;
  return r;
}

}  // namespace lightstore
