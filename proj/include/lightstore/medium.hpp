#pragma once

#include "lightstore/units.hpp"

namespace lightstore {

/// Static description of the vapor cell. Units: cm, us, rad/us.
struct MediumParams {
  double density = 1e12;                           ///< cm^-3
  double wavelength = 795.0 * units::kCentimetersPerNanometer;
  double gamma_r = units::mhz_to_rate(5.75);       ///< radiative linewidth
  double gamma_opt = units::mhz_to_rate(100.0);    ///< total optical decay rate
  double gamma_0 = 1.0 / 150.0;                    ///< spin coherence decay rate
  double length = 4.0;                             ///< cm
  double c_light = units::kSpeedOfLight;           ///< cm/us

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  bool operator==(const MediumParams&) const = default;
};

/// Two-photon (Raman) and one-photon detunings in rad/us.
struct Detuning {
  double two_photon = 0.0;
  double one_photon = 0.0;

  bool operator==(const Detuning&) const = default;
};

struct DerivedConstants {
  double kappa = 0.0;            ///< rad^2/us^2
  double alpha = 0.0;            ///< amplitude absorption coefficient, cm^-1
  double alpha_intensity = 0.0;  ///< 2 * alpha
  double optical_depth = 0.0;    ///< alpha_intensity * length; T = exp(-depth)
};

/// kappa = 3 n lambda^2 gamma_r c / (8 pi).
double compute_kappa(const MediumParams& params);

/// c * Omega_c^2 / (Omega_c^2 + kappa). A zero kappa (empty cell) gives c.
double group_velocity(double omega_c, double kappa, double c_light);

/// Control Rabi frequency that yields group velocity `v_g` (0 <= v_g < c).
double control_for_group_velocity(double v_g, double kappa, double c_light);

/// Two-photon detuning produced by a longitudinal field `b_mG`.
double b_field_to_detuning(double b_mG);
double detuning_to_b_field(double delta);

DerivedConstants absorption_profile(const MediumParams& params);

}  // namespace lightstore
