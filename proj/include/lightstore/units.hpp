#pragma once

// Internal unit system: length in cm, time in us, rates in rad/us.

#include <numbers>

namespace lightstore::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Speed of light in cm/us.
inline constexpr double kSpeedOfLight = 2.99792458e4;

/// Zeeman shift of the two-photon resonance per unit field (Faraday resonance
/// width of 20 mG corresponds to 15 kHz).
inline constexpr double kZeemanKHzPerMilliGauss = 0.75;

inline constexpr double kCentimetersPerNanometer = 1e-7;

/// Cyclic frequency in kHz to angular rate in rad/us.
constexpr double khz_to_rate(double khz) { return kTwoPi * khz * 1e-3; }
constexpr double mhz_to_rate(double mhz) { return kTwoPi * mhz; }
constexpr double rate_to_khz(double rate) { return rate / kTwoPi * 1e3; }

}  // namespace lightstore::units
