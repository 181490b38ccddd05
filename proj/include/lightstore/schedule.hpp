#pragma once

#include <optional>
#include <vector>

namespace lightstore {

struct ControlSegment {
  enum class Shape { Constant, Ramp };

  double t_start = 0.0;
  double t_end = 0.0;
  Shape shape = Shape::Constant;
  double from = 0.0;  ///< value at t_start (the constant value for Constant)
  double to = 0.0;    ///< value at t_end; ignored for Constant

  double value(double t) const;

  bool operator==(const ControlSegment&) const = default;
};

/// Switch-off start t0, switch-off complete t1, switch-on start t2 = t1 + tau.
struct StorageTimes {
  double t0 = 0.0;
  double t1 = 0.0;
  std::optional<double> t2;
  double ramp_on = 0.0;  ///< duration of the switch-on segment starting at t2

  double tau() const { return t2 ? *t2 - t1 : 0.0; }
};

/// Piecewise control Rabi frequency Omega_c(t): contiguous constant and
/// raised-cosine segments. Outside the covered window the boundary values hold.
class ControlSchedule {
 public:
  explicit ControlSchedule(std::vector<ControlSegment> segments);

  static ControlSchedule constant(double omega, double t_end);

  /// On at `omega_on`, raised-cosine off over [t_off, t_off + ramp], dark for
  /// `tau`, raised-cosine back on to `omega_release` and held until `t_end`.
  static ControlSchedule storage(double omega_on, double t_off, double ramp, double tau,
                                 double t_end, double omega_release);

  double operator()(double t) const;

  /// Integral of c cos^2(theta(t)) over [ta, tb].
  double integrate_group_velocity(double ta, double tb, double kappa, double c_light) const;

  double max_value() const;
  double t_begin() const { return segments_.front().t_start; }
  double t_end() const { return segments_.back().t_end; }
  const std::vector<ControlSegment>& segments() const { return segments_; }

  std::optional<StorageTimes> storage_times() const;

  bool operator==(const ControlSchedule&) const = default;

 private:
  std::vector<ControlSegment> segments_;
};

}  // namespace lightstore
