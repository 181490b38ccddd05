#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lightstore/medium.hpp"

namespace lightstore {

struct SteadyStateInputs {
  double delta = 0.0;    ///< two-photon detuning, rad/us
  double Delta = 0.0;    ///< one-photon detuning, rad/us
  double omega_c = 0.0;  ///< control Rabi frequency, rad/us
  MediumParams medium;
};

/// Weak-probe amplitude response per unit length: Omega_s(L) = Omega_s(0) exp(k L).
std::complex<double> steady_response(const SteadyStateInputs& in);

/// Intensity transmission exp(2 Re(k) L).
double steady_transmission(const SteadyStateInputs& in);

enum class ScanAxis { BField, Detuning };

struct SpectrumPoint {
  double b_field_mG = 0.0;
  double delta = 0.0;
  double transmission = 0.0;
};

/// Evaluates the transmission at every scan value, preserving order. `in.delta`
/// is replaced by each scan point.
std::vector<SpectrumPoint> transmission_spectrum(std::span<const double> scan, ScanAxis axis,
                                                 const SteadyStateInputs& in);

/// Omega_c^2 / (gamma_opt sqrt(depth)).
double transparency_window(double omega_c, double gamma_opt, double optical_depth);

/// Full width at half maximum of T(delta) in rad/us, measured by bisection on
/// each flank relative to the maximum at delta = 0.
double measure_transmission_fwhm(const SteadyStateInputs& in);

/// Control Rabi frequency whose transmission resonance has full width
/// `target_fwhm` (rad/us).
double calibrate_control_for_fwhm(double target_fwhm, const SteadyStateInputs& in);

}  // namespace lightstore
