#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lightstore/error.hpp"
#include "lightstore/medium.hpp"
#include "lightstore/spectrum.hpp"
#include "lightstore/units.hpp"
#include "oracles.hpp"

using namespace lightstore;

namespace {

SteadyStateInputs default_inputs(double omega_c) {
  SteadyStateInputs in;
  in.medium = MediumParams{};
  in.omega_c = omega_c;
  return in;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("ideal dark state is perfectly transparent") {
  auto in = default_inputs(20.0);
  in.medium.gamma_0 = 0.0;
  CHECK(std::abs(steady_response(in)) == 0.0);
  CHECK(steady_transmission(in) == 1.0);
}

TEST_CASE("without control the cell absorbs as exp(-2 alpha L)") {
  const auto in = default_inputs(0.0);
  const auto d = absorption_profile(in.medium);
  CHECK(std::log(steady_transmission(in)) == doctest::Approx(-d.optical_depth).epsilon(1e-10));
}

TEST_CASE("response agrees with the linear-response oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SteadyStateInputs in;
    in.medium.density = 1e9 + 1e12 * u(rng);
    in.medium.gamma_0 = 0.05 * u(rng);
    in.omega_c = 80.0 * u(rng);
    in.delta = 2.0 * (u(rng) - 0.5);
    in.Delta = 200.0 * (u(rng) - 0.5);
    const double kappa = compute_kappa(in.medium);
    const auto k = oracle::propagation_constant(0.0, kappa, in.medium.gamma_opt, in.medium.gamma_0, in.omega_c,
                                                in.delta, in.Delta);
    const auto got = steady_response(in);
    CHECK(got.real() == doctest::Approx(k.real()).epsilon(1e-10));
    CHECK(got.imag() == doctest::Approx(k.imag()).epsilon(1e-10));
  }
}

TEST_CASE("passive medium: Re k <= 0 on resonance") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SteadyStateInputs in;
    in.medium.gamma_0 = 0.1 * u(rng);
    in.omega_c = 100.0 * u(rng);
    in.delta = 10.0 * (u(rng) - 0.5);
    CHECK(steady_response(in).real() <= 0.0);
  }
}

TEST_CASE("transmission at resonance rises to one as gamma_0 -> 0") {
  auto in = default_inputs(40.0);
  double prev = 0.0;
  for (double g0 : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 0.0}) {
    in.medium.gamma_0 = g0;
    const double t = steady_transmission(in);
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(prev == 1.0);
}

TEST_CASE("stronger control never lowers resonant transmission") {
  auto in = default_inputs(0.0);
  double prev = 0.0;
  for (double w = 0.0; w < 200.0; w += 2.5) {
    in.omega_c = w;
    const double t = steady_transmission(in);
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("spectrum preserves scan order and is symmetric in B") {
  const auto in = default_inputs(25.0);
  std::vector<double> scan{-30.0, -10.0, 0.0, 10.0, 30.0};
  const auto s = transmission_spectrum(scan, ScanAxis::BField, in);
  REQUIRE(s.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s[i].b_field_mG == scan[i]);
  CHECK(s[0].transmission == doctest::Approx(s[4].transmission).epsilon(1e-12));
  CHECK(s[2].transmission > s[3].transmission);
  CHECK(s[1].delta == doctest::Approx(b_field_to_detuning(-10.0)));

  const auto by_delta = transmission_spectrum(std::vector<double>{0.0}, ScanAxis::Detuning, in);
  CHECK(by_delta[0].transmission == doctest::Approx(steady_transmission(in)));
  CHECK_THROWS_AS(transmission_spectrum(std::vector<double>{}, ScanAxis::BField, in), ValidationError);
}

TEST_CASE("measured FWHM agrees with a dense scan") {
  for (double w : {15.0, 25.6, 40.0}) {
    auto in = default_inputs(w);
    const double fwhm = measure_transmission_fwhm(in);
    const double scan = oracle::dense_scan_fwhm(
        [&](double d) {
          auto x = in;
          x.delta = d;
          return steady_transmission(x);
        },
        3.0 * fwhm);
    CHECK(fwhm == doctest::Approx(scan).epsilon(1e-4));
  }
}

TEST_CASE("FWHM follows the Omega^2 / (gamma sqrt(OD)) scaling at high depth") {
  auto in = default_inputs(30.0);
  in.medium.gamma_0 = 0.0;
  in.medium.density = 1e13;
  const double od = absorption_profile(in.medium).optical_depth;
  const double window = transparency_window(in.omega_c, in.medium.gamma_opt, od);
  CHECK(window == doctest::Approx(900.0 / (in.medium.gamma_opt * std::sqrt(od))));
  // Gaussian core of exp(-OD d^2 gamma^2 / W^4): FWHM = 2 sqrt(ln 2) W^2 / (gamma sqrt(OD)).
  CHECK(measure_transmission_fwhm(in) == doctest::Approx(2.0 * std::sqrt(std::log(2.0)) * window).epsilon(0.02));
}

TEST_CASE("calibration reaches the requested width") {
  const auto in = default_inputs(0.0);
  const double target = units::khz_to_rate(15.0);
  const double w = calibrate_control_for_fwhm(target, in);
  auto check = in;
  check.omega_c = w;
  CHECK(measure_transmission_fwhm(check) == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("invalid medium is rejected before evaluation") {
  auto in = default_inputs(10.0);
  in.medium.gamma_opt = 0.0;
  CHECK_THROWS_AS(steady_response(in), ValidationError);
}

}
