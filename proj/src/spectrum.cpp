#include "lightstore/spectrum.hpp"

#include <cmath>

#include "lightstore/error.hpp"

namespace lightstore {

std::complex<double> steady_response(const SteadyStateInputs& in) {
  in.medium.validate();
  if (!std::isfinite(in.delta) || !std::isfinite(in.Delta) || !std::isfinite(in.omega_c) ||
      in.omega_c < 0.0)
    throw ValidationError("steady_response: detunings must be finite and omega_c >= 0");

  const double kappa = compute_kappa(in.medium);
  const std::complex<double> spin(in.medium.gamma_0, in.delta);
  const std::complex<double> optical(in.medium.gamma_opt, in.Delta);
  const double w2 = in.omega_c * in.omega_c;
  const std::complex<double> denom = optical * spin + w2;

  const double scale = std::abs(optical) * std::abs(spin) + w2;
  if (std::abs(denom) <= 1e-30 * scale || scale == 0.0)
    throw SingularityError("steady_response: singular denominator");

  return -(kappa / in.medium.c_light) * spin / denom;
}

double steady_transmission(const SteadyStateInputs& in) {
  return std::exp(2.0 * steady_response(in).real() * in.medium.length);
}

std::vector<SpectrumPoint> transmission_spectrum(std::span<const double> scan, ScanAxis axis,
                                                 const SteadyStateInputs& in) {
  if (scan.empty()) throw ValidationError("transmission_spectrum: empty scan");
  std::vector<SpectrumPoint> curve;
  curve.reserve(scan.size());
  SteadyStateInputs point = in;
  for (double x : scan) {
    SpectrumPoint p;
    if (axis == ScanAxis::BField) {
      p.b_field_mG = x;
      p.delta = b_field_to_detuning(x);
    } else {
      p.delta = x;
      p.b_field_mG = detuning_to_b_field(x);
    }
    point.delta = p.delta;
    p.transmission = steady_transmission(point);
    curve.push_back(p);
  }
  return curve;
}

double transparency_window(double omega_c, double gamma_opt, double optical_depth) {
  if (!(optical_depth > 0.0)) throw ValidationError("transparency_window: optical depth must be > 0");
  if (!(gamma_opt > 0.0)) throw ValidationError("transparency_window: gamma_opt must be > 0");
  return omega_c * omega_c / (gamma_opt * std::sqrt(optical_depth));
}

namespace {

// Half-width of the resonance on the positive-delta flank.
double half_width(const SteadyStateInputs& in) {
  SteadyStateInputs probe = in;
  probe.delta = 0.0;
  const double half = 0.5 * steady_transmission(probe);
  auto level = [&](double delta) {
    probe.delta = delta;
    return steady_transmission(probe) - half;
  };

  double lo = 0.0;
  double hi = std::max({in.medium.gamma_0, in.omega_c * in.omega_c / in.medium.gamma_opt, 1e-9});
  int expansions = 0;
  while (level(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 200) throw NumericalError("transmission never falls to half maximum");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double measure_transmission_fwhm(const SteadyStateInputs& in) {
  if (in.Delta != 0.0) {
    // Off one-photon resonance the line is asymmetric; measure both flanks.
    SteadyStateInputs mirrored = in;
    mirrored.Delta = -in.Delta;
    return half_width(in) + half_width(mirrored);
  }
  return 2.0 * half_width(in);
}

double calibrate_control_for_fwhm(double target_fwhm, const SteadyStateInputs& in) {
  if (!(target_fwhm > 0.0)) throw ValidationError("calibrate_control_for_fwhm: target must be > 0");
  SteadyStateInputs probe = in;
  auto width = [&](double omega) {
    probe.omega_c = omega;
    return measure_transmission_fwhm(probe);
  };

  double lo = 0.0;
  double hi = std::sqrt(target_fwhm * in.medium.gamma_opt);
  int expansions = 0;
  while (width(hi) < target_fwhm) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 100) throw NumericalError("calibrate_control_for_fwhm: target unreachable");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (width(mid) < target_fwhm ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lightstore
