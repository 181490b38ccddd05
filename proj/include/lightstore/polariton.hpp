#pragma once

// Closed-form dark-state polariton analytics: mixing angle, the field/spin
// transform, shape-preserving propagation, and the storage and release maps.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lightstore/medium.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/schedule.hpp"

namespace lightstore {

using cdouble = std::complex<double>;

struct MixingAngle {
  double theta = 0.0;
  double cos = 1.0;
  double sin = 0.0;
};

/// theta = atan2(sqrt(kappa), Omega_c).
MixingAngle mixing_angle(double omega_c, double kappa);

/// Psi = cos(theta) Omega_s - sin(theta) sqrt(kappa) rho_mp, pointwise.
std::vector<cdouble> to_polariton(std::span<const cdouble> omega_s,
                                  std::span<const cdouble> rho_mp, double theta, double kappa);

/// Orthogonal (bright) combination sin(theta) Omega_s + cos(theta) sqrt(kappa) rho_mp.
std::vector<cdouble> to_bright(std::span<const cdouble> omega_s, std::span<const cdouble> rho_mp,
                               double theta, double kappa);

struct FieldPair {
  std::vector<cdouble> omega_s;
  std::vector<cdouble> rho_mp;
};

/// Inverse of (to_polariton, to_bright).
FieldPair from_polariton(std::span<const cdouble> psi, std::span<const cdouble> bright,
                         double theta, double kappa);

/// Uniformly sampled complex profile with cubic interpolation.
struct Profile {
  double z0 = 0.0;
  double dz = 0.0;
  std::vector<cdouble> values;

  double z_end() const { return z0 + dz * static_cast<double>(values.size() - 1); }
  double position(std::size_t i) const { return z0 + dz * static_cast<double>(i); }

  /// Throws BoundaryError outside [z0, z_end].
  cdouble at(double z) const;

  /// integral |values|^2 dz
  double norm() const;
};

/// Shape-preserving transport Psi(z, t) = Psi0(z - X(t)), X(t) the integral of
/// v_g from `t_start`. Output profiles sample [z_lo, z_hi] with the spacing of
/// `psi0`; psi0 must cover every source point z - X (pad it on the incoming
/// side), otherwise BoundaryError.
std::vector<Profile> ideal_propagate(const Profile& psi0, const ControlSchedule& schedule,
                                     const MediumParams& medium, double t_start,
                                     std::span<const double> times, double z_lo, double z_hi);

struct StoredCoherence {
  Profile rho;                  ///< rho_mp(z, t1) on [0, L]
  double v_g0 = 0.0;            ///< group velocity before switch-off
  double stored_fraction = 0.0; ///< (kappa/c) int |rho|^2 dz / int |Omega_in|^2 dt
  bool truncated = false;       ///< image touches a cell boundary
};

/// rho_mp(z, t1) = -sqrt(c / (v_g0 kappa)) Omega_in(t0 + (X01 - z) / v_g0) for
/// 0 < z < L, where X01 is the integral of v_g over [t0, t1]. Requires a
/// schedule with a switch-off.
StoredCoherence stored_coherence(const std::function<cdouble(double)>& input,
                                 const ControlSchedule& schedule, const MediumParams& medium,
                                 std::size_t nz = 4097);
StoredCoherence stored_coherence(const SignalPulseSpec& input, const ControlSchedule& schedule,
                                 const MediumParams& medium, std::size_t nz = 4097);

struct ReleasedField {
  std::vector<double> t;
  std::vector<cdouble> omega_s;  ///< Omega_s(L, t)
  bool empty = false;
  std::string warning;
};

/// Omega_s(L, t) = -cos(theta(t)) sqrt(kappa) rho(L - X2(t), t2) with
/// rho(., t2) = rho(., t1) exp(-(gamma_0 + i delta) tau) and X2 the integral of
/// v_g from t2. Times before t2 give zero.
ReleasedField released_field(const Profile& rho_stored, const ControlSchedule& schedule,
                             const MediumParams& medium, const Detuning& detuning,
                             std::span<const double> times, bool decay_on = true);

struct AdiabaticityReport {
  double bandwidth = 0.0;         ///< FWHM of the input power spectrum, rad/us
  double window = 0.0;            ///< initial transparency window, rad/us
  double ratio = 0.0;             ///< bandwidth / window
  double optical_depth = 0.0;
  double pulse_length_cm = 0.0;   ///< v_g0 * duration
  double absorption_length_cm = 0.0;  ///< 1 / alpha
  double propagation_distance_cm = 0.0;
  bool adiabatic = false;         ///< ratio < 1
  bool warning = false;           ///< ratio in [0.5, 1]
};

/// Power-spectrum FWHM of a Gaussian whose intensity FWHM is `duration`: 4 ln2 / T.
double gaussian_bandwidth(double duration);

AdiabaticityReport adiabaticity_report(const SignalPulseSpec& pulse, const MediumParams& medium,
                                       double omega_c_initial);

}  // namespace lightstore
