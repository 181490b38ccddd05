#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "lightstore/error.hpp"
#include "lightstore/medium.hpp"
#include "lightstore/polariton.hpp"
#include "lightstore/spectrum.hpp"
#include "oracles.hpp"

using namespace lightstore;

namespace {

std::vector<cdouble> random_field(std::size_t n, unsigned seed, double scale) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d(0.0, scale);
  std::vector<cdouble> v(n);
  for (auto& x : v) x = {d(gen), d(gen)};
  return v;
}

double max_abs_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<cdouble>& a) {
  double m = 0.0;
  for (auto x : a) m = std::max(m, std::abs(x));
  return m;
}

// FWHM of a sampled non-negative curve, linear interpolation at the crossings.
double sampled_fwhm(const std::vector<double>& t, const std::vector<double>& y) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[k]) k = i;
  const double half = 0.5 * y[k];
  std::size_t lo = k, hi = k;
  while (lo > 0 && y[lo - 1] > half) --lo;
  while (hi + 1 < y.size() && y[hi + 1] > half) ++hi;
  const double tl = t[lo - 1] + (half - y[lo - 1]) * (t[lo] - t[lo - 1]) / (y[lo] - y[lo - 1]);
  const double th = t[hi] + (half - y[hi]) * (t[hi + 1] - t[hi]) / (y[hi + 1] - y[hi]);
  return th - tl;
}

// Distance covered during a raised-cosine ramp between 0 and `w`, by brute force.
double ramp_travel(double w, double ramp, double kappa) {
  const int n = 200000;
  const double h = ramp / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    const double om = w * 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    sum += oracle::kC * om * om / (om * om + kappa) * h;
  }
  return sum;
}

MediumParams long_ideal_medium() {
  MediumParams m;
  m.length = 10.0;
  m.gamma_0 = 0.0;
  return m;
}

}  // namespace

TEST_SUITE("polariton") {

TEST_CASE("mixing angle limits and group velocity") {
  const double kappa = oracle::kappa(1e12, 795e-7, 2 * oracle::kPi * 5.75);
  CHECK(mixing_angle(std::sqrt(kappa), kappa).theta == doctest::Approx(oracle::kPi / 4).epsilon(1e-14));
  CHECK(mixing_angle(0.0, kappa).theta == doctest::Approx(oracle::kPi / 2).epsilon(1e-14));
  CHECK(mixing_angle(10.0, 0.0).theta == 0.0);
  for (double w : {1.0, 25.0, 52.2, 400.0}) {
    const auto a = mixing_angle(w, kappa);
    CHECK(a.cos * a.cos + a.sin * a.sin == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::kC * a.cos * a.cos == doctest::Approx(oracle::kC * w * w / (w * w + kappa)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mixing_angle(-1.0, kappa), ValidationError);
}

TEST_CASE("polariton transform round trip") {
  const double kappa = compute_kappa(MediumParams{});
  const auto e = random_field(300, 1, 1.0);
  const auto s = random_field(300, 2, 1e-4);
  for (double w : {0.5, 52.2, 3e4}) {
    const double theta = mixing_angle(w, kappa).theta;
    const auto psi = to_polariton(e, s, theta, kappa);
    const auto phi = to_bright(e, s, theta, kappa);
    const auto back = from_polariton(psi, phi, theta, kappa);
    CHECK(max_abs_diff(back.omega_s, e) < 1e-12 * max_abs(e));
    CHECK(max_abs_diff(back.rho_mp, s) < 1e-12 * max_abs(s));
  }
}

TEST_CASE("dark state has no bright component") {
  const double kappa = compute_kappa(MediumParams{});
  const double w = 52.2074;
  const auto e = random_field(200, 3, 1.0);
  std::vector<cdouble> s(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) s[i] = -e[i] / w;
  const double theta = mixing_angle(w, kappa).theta;
  CHECK(max_abs(to_bright(e, s, theta, kappa)) < 1e-12 * max_abs(e));
  // |Psi| = |Omega_s| / cos(theta) in the dark state.
  const auto psi = to_polariton(e, s, theta, kappa);
  for (std::size_t i = 0; i < e.size(); ++i)
    CHECK(std::abs(psi[i]) == doctest::Approx(std::abs(e[i]) / std::cos(theta)).epsilon(1e-12));
}

TEST_CASE("mismatched grids are rejected") {
  const std::vector<cdouble> a(10), b(11);
  CHECK_THROWS_AS(to_polariton(a, b, 0.3, 1.0), ValidationError);
  CHECK_THROWS_AS(to_bright(a, b, 0.3, 1.0), ValidationError);
  CHECK_THROWS_AS(from_polariton(a, b, 0.3, 1.0), ValidationError);
}

TEST_CASE("ideal propagation translates at the group velocity") {
  const MediumParams m;
  const double kappa = compute_kappa(m);
  const double w = control_for_group_velocity(0.1, kappa, m.c_light);
  const auto sched = ControlSchedule::constant(w, 200.0);
  const double sigma = 0.3;
  Profile psi0;
  psi0.z0 = -10.0;
  psi0.dz = 0.005;
  for (int i = 0; i <= 2800; ++i) {
    const double z = psi0.z0 + psi0.dz * i;
    psi0.values.push_back(std::exp(-z * z / (2 * sigma * sigma)) * std::polar(1.0, 0.3));
  }
  const std::vector<double> times{0.0, 10.0, 25.0, 40.0};
  const auto out = ideal_propagate(psi0, sched, m, 0.0, times, 0.0, 4.0);
  REQUIRE(out.size() == times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double shift = 0.1 * times[k];
    double err = 0.0;
    for (std::size_t i = 0; i < out[k].values.size(); ++i) {
      const double x = out[k].position(i) - shift;
      err = std::max(err, std::abs(out[k].values[i] - std::exp(-x * x / (2 * sigma * sigma)) * std::polar(1.0, 0.3)));
    }
    CHECK(err < 1e-6);
  }
  // Fully inside the cell, the norm is conserved.
  CHECK(out[2].norm() == doctest::Approx(std::sqrt(oracle::kPi) * sigma).epsilon(1e-6));
  CHECK_THROWS_AS(ideal_propagate(psi0, sched, m, 0.0, std::vector<double>{200.0}, 0.0, 4.0), BoundaryError);
}

TEST_CASE("stored coherence maps the entered pulse onto the spin wave") {
  const MediumParams m;
  const double kappa = compute_kappa(m);
  const double w = control_for_group_velocity(0.1, kappa, m.c_light);
  const auto sched = ControlSchedule::storage(w, 67.0, 3.0, 50.0, 200.0, w);
  const SignalPulseSpec pulse;
  const auto sc = stored_coherence(pulse, sched, m);
  CHECK(sc.v_g0 == doctest::Approx(0.1).epsilon(1e-10));
  // The input tail is still entering at t0.
  CHECK(sc.truncated);

  // The stored fraction is the input energy that entered the cell and has
  // not yet left it: input times in [t0 + (X - L)/v, t0 + X/v].
  const double x = ramp_travel(w, 3.0, kappa);
  const double t_front = 67.0 + (x - m.length) / 0.1;
  const double t_back = 67.0 + x / 0.1;
  auto energy = [&](double a, double b) {
    const int n = 40000;
    std::vector<double> y(n + 1);
    for (int i = 0; i <= n; ++i) y[i] = std::norm(pulse(a + (b - a) * i / n));
    return oracle::trapz(y, (b - a) / n);
  };
  CHECK(sc.stored_fraction == doctest::Approx(energy(t_front, t_back) / energy(0.0, 200.0)).epsilon(1e-6));
  CHECK(sc.stored_fraction > 0.95);

  // rho = -sqrt(c / (v kappa)) Omega_in at the corresponding input time.
  const double z = 2.0;
  CHECK(std::abs(sc.rho.at(z) + std::sqrt(m.c_light / (0.1 * kappa)) * pulse(67.0 + (x - z) / 0.1)) <
        1e-9 * std::abs(sc.rho.at(z)));

  CHECK_THROWS_AS(stored_coherence(pulse, ControlSchedule::constant(w, 100.0), m), ValidationError);
}

TEST_CASE("release of a stored pulse") {
  const MediumParams m = long_ideal_medium();
  const double kappa = compute_kappa(m);
  const double w = control_for_group_velocity(0.1, kappa, m.c_light);
  const double t_off = 80.0, ramp = 3.0;
  const SignalPulseSpec pulse;

  auto release = [&](double tau, double w_release, const MediumParams& med, const Detuning& det = {}) {
    const double t2 = t_off + ramp + tau;
    const auto sched = ControlSchedule::storage(w, t_off, ramp, tau, t2 + 400.0, w_release);
    const auto sc = stored_coherence(pulse, sched, med);
    std::vector<double> times;
    for (double t = t2; t <= t2 + 250.0; t += 0.02) times.push_back(t);
    return std::pair{sc, released_field(sc.rho, sched, med, det, times)};
  };

  SUBCASE("all stored excitations come back out") {
    const auto [sc, rel] = release(0.0, w, m);
    CHECK_FALSE(sc.truncated);
    std::vector<double> y;
    for (auto v : rel.omega_s) y.push_back(std::norm(v));
    const double out = oracle::trapz(y, 0.02);
    CHECK(out == doctest::Approx((kappa / m.c_light) * sc.rho.norm()).epsilon(1e-6));
    CHECK_FALSE(rel.empty);
  }

  SUBCASE("store and release reproduces the delayed input") {
    const double tau = 20.0;
    const auto [sc, rel] = release(tau, w, m);
    const double x_ramp = ramp_travel(w, ramp, kappa);
    const double delay = m.length / 0.1 + tau + 2 * ramp - 2 * x_ramp / 0.1;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rel.t.size(); ++k) {
      const cdouble expect = rel.t[k] >= t_off + 2 * ramp + tau ? pulse(rel.t[k] - delay) : 0.0;
      num += std::norm(rel.omega_s[k] - expect);
      den += std::norm(expect);
    }
    CHECK(std::sqrt(num / den) < 1e-3);
  }

  SUBCASE("spin decay and two-photon detuning act during the dark time") {
    MediumParams lossy = m;
    lossy.gamma_0 = 1.0 / 150.0;
    const double tau = 60.0;
    const auto [sc0, rel0] = release(tau, w, m);
    const auto [sc1, rel1] = release(tau, w, lossy, Detuning{0.05, 0.0});
    const cdouble factor = std::exp(-cdouble(1.0 / 150.0, 0.05) * tau);
    for (std::size_t k = 0; k < rel0.t.size(); k += 50)
      CHECK(std::abs(rel1.omega_s[k] - factor * rel0.omega_s[k]) < 1e-12 * (1.0 + std::abs(rel0.omega_s[k])));
  }

  SUBCASE("a stronger release control compresses the pulse in time") {
    const auto [sc1, rel1] = release(10.0, w, m);
    const auto [sc2, rel2] = release(10.0, 2 * w, m);
    std::vector<double> y1, y2;
    for (auto v : rel1.omega_s) y1.push_back(std::norm(v));
    for (auto v : rel2.omega_s) y2.push_back(std::norm(v));
    CHECK(oracle::trapz(y2, 0.02) == doctest::Approx(oracle::trapz(y1, 0.02)).epsilon(1e-4));
    const double v1 = oracle::kC * w * w / (w * w + kappa);
    const double v2 = oracle::kC * 4 * w * w / (4 * w * w + kappa);
    CHECK(sampled_fwhm(rel2.t, y2) / sampled_fwhm(rel1.t, y1) == doctest::Approx(v1 / v2).epsilon(0.01));
  }
}

TEST_CASE("release without switch-on is empty") {
  const MediumParams m;
  const double kappa = compute_kappa(m);
  const double w = control_for_group_velocity(0.1, kappa, m.c_light);
  const auto off = ControlSchedule(std::vector<ControlSegment>{
      {0.0, 67.0, ControlSegment::Shape::Constant, w, w},
      {67.0, 70.0, ControlSegment::Shape::Ramp, w, 0.0},
      {70.0, 300.0, ControlSegment::Shape::Constant, 0.0, 0.0}});
  const auto sc = stored_coherence(SignalPulseSpec{}, off, m);
  const std::vector<double> times{100.0, 200.0};
  const auto rel = released_field(sc.rho, off, m, Detuning{}, times);
  CHECK(rel.empty);
  CHECK_FALSE(rel.warning.empty());
  CHECK(rel.omega_s[0] == 0.0);
  CHECK(rel.omega_s[1] == 0.0);
}

TEST_CASE("adiabaticity report") {
  const MediumParams m;
  const double kappa = oracle::kappa(m.density, m.wavelength, m.gamma_r);
  const double od = 2 * kappa / (m.gamma_opt * oracle::kC) * m.length;
  SignalPulseSpec pulse;

  for (double w : {52.2074, 25.0, 10.0}) {
    const auto r = adiabaticity_report(pulse, m, w);
    const double bw = 4 * std::log(2.0) / 15.0;
    const double window = w * w / (m.gamma_opt * std::sqrt(od));
    CHECK(r.bandwidth == doctest::Approx(bw).epsilon(1e-12));
    CHECK(r.optical_depth == doctest::Approx(od).epsilon(1e-10));
    CHECK(r.window == doctest::Approx(window).epsilon(1e-10));
    CHECK(r.ratio == doctest::Approx(bw / window).epsilon(1e-10));
    CHECK(r.adiabatic == (bw / window < 1.0));
    CHECK(r.warning == (bw / window >= 0.5 && bw / window <= 1.0));
    CHECK(r.pulse_length_cm == doctest::Approx(oracle::kC * w * w / (w * w + kappa) * 15.0).epsilon(1e-10));
    CHECK(r.absorption_length_cm == doctest::Approx(2 * m.length / od).epsilon(1e-10));
  }
  CHECK(adiabaticity_report(pulse, m, 52.2074).adiabatic);
  CHECK_FALSE(adiabaticity_report(pulse, m, 10.0).adiabatic);

  pulse.duration = -1.0;
  CHECK_THROWS_AS(adiabaticity_report(pulse, m, 52.2074), ValidationError);
}

}
