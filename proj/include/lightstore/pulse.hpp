#pragma once

#include <complex>

namespace lightstore {

/// Signal field entering the cell at z = 0.
///
/// Gaussian: intensity FWHM `duration`, peak at `center`.
/// Cw: zero before `center`, raised-cosine rise over `duration`, then constant.
struct SignalPulseSpec {
  enum class Shape { Gaussian, Cw };

  Shape shape = Shape::Gaussian;
  double center = 40.0;     ///< us
  double duration = 15.0;   ///< us
  double amplitude = 1.0;   ///< peak Rabi frequency, rad/us

  std::complex<double> operator()(double t) const;

  /// Throws ValidationError on negative amplitude or non-positive duration.
  void validate() const;

  bool operator==(const SignalPulseSpec&) const = default;
};

}  // namespace lightstore
