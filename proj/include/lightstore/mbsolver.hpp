#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lightstore/medium.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/schedule.hpp"

namespace lightstore {

using cdouble = std::complex<double>;

struct Grid {
  std::size_t nz = 512;
  double dt = 0.01;    ///< us
  double t_max = 0.0;  ///< us

  double dz(double length) const { return length / static_cast<double>(nz - 1); }
  std::size_t steps() const;

  bool operator==(const Grid&) const = default;
};

/// Fields on the spatial grid at one instant.
struct FieldState {
  double time = 0.0;
  double control = 0.0;  ///< Omega_c at `time`
  double dz = 0.0;
  std::vector<cdouble> omega_s;
  std::vector<cdouble> rho_ep;
  std::vector<cdouble> rho_mp;
};

/// Time series at z = 0 (input) and z = L (detector), sampled every step.
struct DetectorSeries {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<cdouble> field;   ///< Omega_s(L, t)
  std::vector<cdouble> input;   ///< Omega_s(0, t)
  std::vector<double> intensity;
  std::vector<double> control;

  std::size_t size() const { return t.size(); }
};

struct Observables {
  double input_energy = 0.0;   ///< integral of |Omega_s(0,t)|^2 dt
  double output_energy = 0.0;  ///< integral of |Omega_s(L,t)|^2 dt
  double transmission = 0.0;   ///< output / input energy
  double output_centroid = 0.0;
  std::optional<double> delay;
  std::optional<double> compression_ratio;
  std::optional<double> retrieval_efficiency;
  double peak_I_energy = 0.0;
  double peak_II_energy = 0.0;
  double peak_I_amplitude = 0.0;
  double peak_II_amplitude = 0.0;
};

struct RunResult {
  DetectorSeries detector;
  std::vector<FieldState> snapshots;
  Observables observables;
  std::optional<StorageTimes> storage;
  std::vector<std::string> warnings;
};

struct SolverOptions {
  bool decay_on = true;
  Detuning detuning;
  std::vector<double> snapshot_times;
};

/// Checks the grid against the medium, schedule and pulse it will be used
/// with; throws ValidationError before any stepping.
void check_resolution(const MediumParams& medium, const ControlSchedule& schedule,
                      const SignalPulseSpec& pulse, const Grid& grid);

/// Integrates the weak-probe Maxwell-Bloch equations of the Lambda system:
///
///   d/dt rho_ep = -(gamma_opt + i Delta) rho_ep + i Omega_s + i Omega_c(t) rho_mp
///   d/dt rho_mp = -(gamma_0 + i delta) rho_mp + i Omega_c(t) rho_ep
///   d/dz Omega_s = (i kappa / c) rho_ep
///
/// with Omega_s(0, t) given by `pulse`, no light in the cell at t = 0 and zero
/// initial coherences. The field
/// equation carries no retardation, so each time step is one implicit
/// trapezoid sweep in z; the atomic equations use the exact propagator of the
/// step with the drive interpolated linearly.
RunResult evolve(const MediumParams& medium, const ControlSchedule& schedule,
                 const SignalPulseSpec& pulse, const Grid& grid,
                 const SolverOptions& options = {});

/// Centroid of the detector intensity relative to the reference run.
double measure_delay(const RunResult& result, const RunResult& reference);

/// Free-space pulse length c T over the FWHM of the polariton density
/// |Psi(z)|^2 in the snapshot. Throws ContainmentError when the density at
/// either cell boundary exceeds 10% of its peak.
double measure_compression(const FieldState& snapshot, double pulse_duration, double kappa,
                           double c_light);

struct EfficiencyMeasurement {
  double efficiency = 0.0;
  bool no_release = false;
};

/// Peak II energy over the input energy not leaked in peak I.
EfficiencyMeasurement measure_retrieval_efficiency(const RunResult& result);

/// Polariton number integral |Psi|^2 dz of a snapshot.
double polariton_number(const FieldState& snapshot, double kappa);

}  // namespace lightstore
