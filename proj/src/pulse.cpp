#include "lightstore/pulse.hpp"

#include <cmath>
#include <numbers>

#include "lightstore/error.hpp"

namespace lightstore {

std::complex<double> SignalPulseSpec::operator()(double t) const {
  switch (shape) {
    case Shape::Gaussian: {
      const double x = (t - center) / duration;
      return amplitude * std::exp(-2.0 * std::numbers::ln2 * x * x);
    }
    case Shape::Cw: {
      if (t <= center) return 0.0;
      if (t >= center + duration) return amplitude;
      const double s = (t - center) / duration;
      return amplitude * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
    }
  }
  return 0.0;
}

void SignalPulseSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    throw ValidationError("pulse.amplitude: must be finite and >= 0");
  if (!std::isfinite(duration) || !(duration > 0.0))
    throw ValidationError("pulse.duration: must be finite and > 0");
  if (!std::isfinite(center)) throw ValidationError("pulse.center: must be finite");
}

}  // namespace lightstore
