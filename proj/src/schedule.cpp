#include "lightstore/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lightstore/error.hpp"
#include "lightstore/medium.hpp"
#include "lightstore/numeric.hpp"
#include "lightstore/units.hpp"

namespace lightstore {

double ControlSegment::value(double t) const {
  if (shape == Shape::Constant) return from;
  const double s = std::clamp((t - t_start) / (t_end - t_start), 0.0, 1.0);
  return from + (to - from) * 0.5 * (1.0 - std::cos(units::kPi * s));
}

ControlSchedule::ControlSchedule(std::vector<ControlSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("schedule: no segments");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const std::string where = "schedule segment " + std::to_string(i);
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || !(s.t_end > s.t_start))
      throw ValidationError(where + ": need finite t_start < t_end");
    if (!std::isfinite(s.from) || s.from < 0.0 ||
        (s.shape == ControlSegment::Shape::Ramp && (!std::isfinite(s.to) || s.to < 0.0)))
      throw ValidationError(where + ": Rabi frequency must be finite and >= 0");
    if (i > 0) {
      const auto& prev = segments_[i - 1];
      if (std::abs(prev.t_end - s.t_start) > 1e-12 * std::max(1.0, std::abs(s.t_start)))
        throw ValidationError(where + ": segments must be contiguous");
      const double left = prev.value(prev.t_end);
      const double right = s.value(s.t_start);
      if (std::abs(left - right) > 1e-9 * std::max(1.0, std::max(left, right)))
        throw ValidationError(where + ": control must be continuous");
    }
  }
}

ControlSchedule ControlSchedule::constant(double omega, double t_end) {
  return ControlSchedule({{0.0, t_end, ControlSegment::Shape::Constant, omega, omega}});
}

ControlSchedule ControlSchedule::storage(double omega_on, double t_off, double ramp, double tau,
                                         double t_end, double omega_release) {
  using Shape = ControlSegment::Shape;
  if (!(t_off > 0.0) || !(ramp > 0.0) || !(tau >= 0.0))
    throw ValidationError("storage schedule: need t_off > 0, ramp > 0, tau >= 0");
  const double t1 = t_off + ramp;
  const double t2 = t1 + tau;
  const double t_on = t2 + ramp;
  if (!(t_end > t_on)) throw ValidationError("storage schedule: t_end must follow switch-on");

  std::vector<ControlSegment> segs;
  segs.push_back({0.0, t_off, Shape::Constant, omega_on, omega_on});
  segs.push_back({t_off, t1, Shape::Ramp, omega_on, 0.0});
  if (tau > 0.0) segs.push_back({t1, t2, Shape::Constant, 0.0, 0.0});
  segs.push_back({t2, t_on, Shape::Ramp, 0.0, omega_release});
  segs.push_back({t_on, t_end, Shape::Constant, omega_release, omega_release});
  return ControlSchedule(std::move(segs));
}

double ControlSchedule::operator()(double t) const {
  if (t <= segments_.front().t_start) return segments_.front().value(segments_.front().t_start);
  if (t >= segments_.back().t_end) return segments_.back().value(segments_.back().t_end);
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const ControlSegment& s) { return x < s.t_end; });
  return it->value(t);
}

double ControlSchedule::integrate_group_velocity(double ta, double tb, double kappa,
                                                 double c_light) const {
  if (tb < ta) return -integrate_group_velocity(tb, ta, kappa, c_light);
  auto vg = [&](double t) { return group_velocity((*this)(t), kappa, c_light); };

  // Panels aligned to segment boundaries so each integrand piece is smooth.
  std::vector<double> cuts{ta};
  for (const auto& s : segments_)
    for (double b : {s.t_start, s.t_end})
      if (b > ta && b < tb) cuts.push_back(b);
  cuts.push_back(tb);
  std::sort(cuts.begin(), cuts.end());

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) sum += numeric::integrate(vg, cuts[i], cuts[i + 1], 32);
  return sum;
}

double ControlSchedule::max_value() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max({m, s.from, s.shape == ControlSegment::Shape::Ramp ? s.to : 0.0});
  return m;
}

std::optional<StorageTimes> ControlSchedule::storage_times() const {
  using Shape = ControlSegment::Shape;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& off = segments_[i];
    if (off.shape != Shape::Ramp || !(off.from > 0.0) || off.to != 0.0) continue;
    StorageTimes times;
    times.t0 = off.t_start;
    times.t1 = off.t_end;
    for (std::size_t j = i + 1; j < segments_.size(); ++j) {
      if (segments_[j].value(segments_[j].t_end) > 0.0) {
        times.t2 = segments_[j].t_start;
        times.ramp_on = segments_[j].t_end - segments_[j].t_start;
        break;
      }
    }
    return times;
  }
  return std::nullopt;
}

}  // namespace lightstore
