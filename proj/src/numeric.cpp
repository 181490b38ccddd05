#include "lightstore/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "lightstore/error.hpp"

namespace lightstore::numeric {

double trapezoid(std::span<const double> y, double h) { return trapezoid(y, h, 0, y.size()); }

double trapezoid(std::span<const double> y, double h, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, y.size());
  if (hi <= lo + 1) return 0.0;
  double sum = 0.5 * (y[lo] + y[hi - 1]);
  for (std::size_t i = lo + 1; i + 1 < hi; ++i) sum += y[i];
  return sum * h;
}

double centroid(std::span<const double> y, double x0, double h) {
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    m0 += y[i];
    m1 += y[i] * (x0 + h * static_cast<double>(i));
  }
  if (!(m0 > 0.0)) throw NoSignalError("centroid of an empty signal");
  return m1 / m0;
}

double fwhm(std::span<const double> y, double h) {
  if (y.size() < 3) return 0.0;
  const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[peak];
  if (!(half > 0.0)) return 0.0;

  std::size_t l = peak;
  while (l > 0 && y[l - 1] >= half) --l;
  std::size_t r = peak;
  while (r + 1 < y.size() && y[r + 1] >= half) ++r;
  if (l == 0 || r + 1 == y.size()) return 0.0;

  const double left = static_cast<double>(l) - (y[l] - half) / (y[l] - y[l - 1]);
  const double right = static_cast<double>(r) + (y[r] - half) / (y[r] - y[r + 1]);
  return (right - left) * h;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::complex<double> interpolate_cubic(std::span<const std::complex<double>> values, double x0,
                                       double h, double x) {
  const std::size_t n = values.size();
  if (n == 0) throw BoundaryError("interpolate_cubic: empty profile");
  const double u = (x - x0) / h;
  const double last = static_cast<double>(n - 1);
  if (u < -1e-9 || u > last + 1e-9) throw BoundaryError("interpolate_cubic: query outside support");
  if (n < 4) {
    const double uc = std::clamp(u, 0.0, last);
    const auto i = std::min(static_cast<std::size_t>(uc), n - 1);
    if (i + 1 >= n) return values[i];
    const double f = uc - static_cast<double>(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
  }
  const double uc = std::clamp(u, 0.0, last);
  auto i = static_cast<std::ptrdiff_t>(std::floor(uc));
  i = std::clamp<std::ptrdiff_t>(i - 1, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double s = uc - static_cast<double>(i);  // position relative to node i, in [0, 3]
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  const auto k = static_cast<std::size_t>(i);
  return w0 * values[k] + w1 * values[k + 1] + w2 * values[k + 2] + w3 * values[k + 3];
}

}  // namespace lightstore::numeric
