#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lightstore::numeric {

/// Trapezoid rule over uniformly spaced samples.
double trapezoid(std::span<const double> y, double h);

/// Trapezoid rule of y over [lo, hi) index range.
double trapezoid(std::span<const double> y, double h, std::size_t lo, std::size_t hi);

/// First moment of a non-negative density over uniform samples x0 + i*h.
double centroid(std::span<const double> y, double x0, double h);

/// Width at half of max(y), crossings located by linear interpolation on each
/// side of the maximum. Returns 0 when the curve never drops below half.
double fwhm(std::span<const double> y, double h);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Four-point cubic Lagrange interpolation on a uniform grid starting at x0.
std::complex<double> interpolate_cubic(std::span<const std::complex<double>> values, double x0,
                                       double h, double x);

/// Gauss-Legendre integral of f over [a, b] split into `pieces` panels.
template <class F>
double integrate(F&& f, double a, double b, int pieces = 16) {
  static constexpr double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                      -0.9061798459386640, 0.9061798459386640};
  static constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665,
                                        0.4786286704993665, 0.2369268850561891,
                                        0.2369268850561891};
  const double w = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (int k = 0; k < 5; ++k) sum += weights[k] * f(mid + 0.5 * w * nodes[k]);
  }
  return 0.5 * w * sum;
}

}  // namespace lightstore::numeric
