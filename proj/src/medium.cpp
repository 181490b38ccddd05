#include "lightstore/medium.hpp"

#include <cmath>
#include <string>

#include "lightstore/error.hpp"

namespace lightstore {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(std::string("medium.") + field + ": " + what);
}

}  // namespace

void MediumParams::validate() const {
  require(std::isfinite(density) && density >= 0.0, "density", "must be finite and >= 0");
  require(std::isfinite(wavelength) && wavelength > 0.0, "lambda", "must be finite and > 0");
  require(std::isfinite(gamma_r) && gamma_r > 0.0, "gamma_r", "must be finite and > 0");
  require(std::isfinite(gamma_opt) && gamma_opt > 0.0, "gamma_opt", "must be finite and > 0");
  require(gamma_opt >= gamma_r, "gamma_opt", "must be >= gamma_r");
  require(std::isfinite(gamma_0) && gamma_0 >= 0.0, "gamma_0", "must be finite and >= 0");
  require(std::isfinite(length) && length > 0.0, "length", "must be finite and > 0");
  require(std::isfinite(c_light) && c_light > 0.0, "c_light", "must be finite and > 0");
}

double compute_kappa(const MediumParams& params) {
  params.validate();
  return 3.0 * params.density * params.wavelength * params.wavelength * params.gamma_r *
         params.c_light / (8.0 * units::kPi);
}

double group_velocity(double omega_c, double kappa, double c_light) {
  if (!(omega_c >= 0.0) || !std::isfinite(omega_c))
    throw ValidationError("group_velocity: omega_c must be finite and >= 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw ValidationError("group_velocity: kappa must be finite and >= 0");
  if (kappa == 0.0) return c_light;
  const double w2 = omega_c * omega_c;
  return c_light * w2 / (w2 + kappa);
}

double control_for_group_velocity(double v_g, double kappa, double c_light) {
  if (!(v_g >= 0.0) || !(v_g < c_light))
    throw ValidationError("control_for_group_velocity: need 0 <= v_g < c");
  if (!(kappa > 0.0)) throw ValidationError("control_for_group_velocity: kappa must be > 0");
  return std::sqrt(kappa * v_g / (c_light - v_g));
}

double b_field_to_detuning(double b_mG) {
  if (!std::isfinite(b_mG)) throw ValidationError("b_field_to_detuning: field must be finite");
  return units::khz_to_rate(units::kZeemanKHzPerMilliGauss * b_mG);
}

double detuning_to_b_field(double delta) {
  return units::rate_to_khz(delta) / units::kZeemanKHzPerMilliGauss;
}

DerivedConstants absorption_profile(const MediumParams& params) {
  DerivedConstants d;
  d.kappa = compute_kappa(params);
  d.alpha = d.kappa / (params.gamma_opt * params.c_light);
  d.alpha_intensity = 2.0 * d.alpha;
  d.optical_depth = d.alpha_intensity * params.length;
  return d;
}

}  // namespace lightstore
