// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lightstore/medium.hpp"
#include "lightstore/polariton.hpp"
#include "lightstore/scenarios.hpp"
#include "lightstore/units.hpp"

using namespace lightstore;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* mark(bool ok) { return ok ? "ok" : "FAIL"; }

double energy(const std::vector<cdouble>& v, double dt) {
  double s = 0.0;
  for (auto x : v) s += std::norm(x);
  return s * dt;
}

// 1. Spectrum shape.
Verdict spectrum_shape() {
  const auto o = run_scenario(builtin_scenario("spectrum-fig1b"));
  const auto best = std::max_element(o.spectrum.begin(), o.spectrum.end(),
                                     [](const auto& a, const auto& b) { return a.transmission < b.transmission; });
  double wings = 0.0;
  for (const auto& p : o.spectrum)
    if (std::abs(p.b_field_mG) > 20.0) wings = std::max(wings, p.transmission);
  const double khz = units::rate_to_khz(o.spectrum_fwhm);
  const bool peak_ok = std::abs(best->b_field_mG) < 1e-9;
  const bool wings_ok = wings < 0.05;
  const bool width_ok = std::abs(khz - 15.0) <= 1.5;
  return {peak_ok && wings_ok && width_ok,
          fmt("max at B = %g mG [%s]; max T for |B| > 20 mG = %.3g (< 0.05) [%s]; FWHM = %.3f kHz (15 +- 10%%) [%s]",
              best->b_field_mG, mark(peak_ok), wings, mark(wings_ok), khz, mark(width_ok))};
}

// 2. Slow-light delay.
Verdict slow_light_delay() {
  const auto o = run_scenario(builtin_scenario("slow-light"));
  const double delay = o.run->observables.delay.value_or(NAN);
  const bool ok = std::abs(delay - 40.0) <= 0.15 * 40.0;
  return {ok, fmt("v_g = %.4g cm/us, delay = %.3f us (40 +- 15%%)", o.initial_group_velocity, delay)};
}

// 3. Compression.
Verdict compression() {
  const auto s = builtin_scenario("slow-light");
  const auto o = run_scenario(s);
  const double ratio = o.run->observables.compression_ratio.value_or(NAN);
  const double expected = s.medium.c_light / o.initial_group_velocity;
  const bool big = ratio > 1e5;
  const bool agrees = std::abs(ratio / expected - 1.0) <= 0.20;
  return {big && agrees, fmt("ratio = %.4g (> 1e5) [%s]; c/v_g = %.4g, deviation %.1f%% (<= 20%%) [%s]", ratio,
                             mark(big), expected, 100.0 * (ratio / expected - 1.0), mark(agrees))};
}

// 4. Storage phenomenology.
Verdict storage_phenomenology() {
  bool all = true;
  std::string detail;
  for (const char* name : {"storage-50us", "storage-100us", "storage-200us"}) {
    const auto o = run_scenario(builtin_scenario(name));
    const auto& d = o.run->detector;
    const auto& st = *o.run->storage;
    const double t2 = *st.t2;
    double peak_i = 0.0, dark = 0.0, peak_ii = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d.t[k] <= st.t1) peak_i = std::max(peak_i, d.intensity[k]);
      else if (d.t[k] < t2) dark = std::max(dark, d.intensity[k]);
      else peak_ii = std::max(peak_ii, d.intensity[k]);
    }
    // Onset: first sample after switch-off where the output reaches 1% of peak II.
    double onset = NAN;
    for (std::size_t k = 0; k < d.size(); ++k)
      if (d.t[k] > st.t1 && d.intensity[k] >= 0.01 * peak_ii) {
        onset = d.t[k];
        break;
      }
    const double ramp = st.ramp_on;
    const bool dark_ok = dark < 1e-6 * peak_i;
    const bool onset_ok = onset >= t2 && onset <= t2 + ramp;
    all = all && dark_ok && onset_ok;
    detail += fmt("%stau=%g: dark/peakI = %.2g [%s], onset %.2f us in [%g, %g] [%s]", detail.empty() ? "" : "; ",
                  st.tau(), dark / peak_i, mark(dark_ok), onset, t2, t2 + ramp, mark(onset_ok));
  }
  return {all, detail};
}

// 5. Decay constant and long storage.
Verdict decay_constant() {
  const Scenario base = builtin_scenario("storage-50us");
  SweepSpec spec{base.name, "schedule.tau", {0.0, 50.0, 100.0, 150.0, 200.0, 300.0}, SweepMetric::Efficiency, 1};
  const auto fit = run_sweep(base, spec);
  const double t_c = fit.coherence_time.value_or(NAN);
  const bool fit_ok = std::abs(t_c - 150.0) <= 0.05 * 150.0;

  spec.values = {0.0, 500.0};
  const auto far = run_sweep(base, spec);
  const double rel = far.rows[1].metric / far.rows[0].metric;
  const bool far_ok = rel > 0.01;
  return {fit_ok && far_ok,
          fmt("coherence time = %.2f us (150 +- 5%%, R^2 = %.6f) [%s]; efficiency(500 us) / efficiency(0) = %.3g%% "
              "(> 1%%) [%s]",
              t_c, fit.fit ? fit.fit->r_squared : NAN, mark(fit_ok), 100.0 * rel, mark(far_ok))};
}

// 6. Solver against the polariton analytics.
Verdict oracle_equivalence() {
  const auto o = run_scenario(builtin_scenario("storage-ideal"));
  const double l2 = o.comparison->relative_l2_error;
  const double eff = o.run->observables.retrieval_efficiency.value_or(NAN);
  const bool l2_ok = l2 < 0.05;
  const bool eff_ok = eff >= 0.95;
  return {l2_ok && eff_ok, fmt("relative L2 = %.3g (< 0.05) [%s]; round-trip efficiency = %.4f (>= 0.95) [%s]", l2,
                               mark(l2_ok), eff, mark(eff_ok))};
}

// 7. Adiabaticity breakdown.
Verdict adiabaticity_breakdown() {
  const auto o = run_scenario(builtin_scenario("cw-eit-weak"));
  const double ratio = o.comparison->energy_ratio;
  const bool ratio_ok = ratio < 0.5;
  const bool flagged = !o.adiabaticity.adiabatic;
  return {ratio_ok && flagged,
          fmt("cw / dynamic energy at matched delay (tau = %.1f us) = %.3f (< 0.5) [%s]; bandwidth / window = %.2f, "
              "non-adiabatic [%s]",
              o.comparison->matched_tau, ratio, mark(ratio_ok), o.adiabaticity.ratio, mark(flagged))};
}

// 8. Analytic identities and polariton number through a storage cycle.
Verdict identities() {
  const Scenario s = builtin_scenario("storage-ideal");
  const auto o = run_scenario(s);
  const double kappa = o.kappa;
  const auto& snaps = o.run->snapshots;

  double dark_err = 0.0, trip_err = 0.0, scale = 0.0;
  for (const auto& snap : snaps) {
    if (!(snap.control > 0.0)) continue;
    const auto angle = mixing_angle(snap.control, kappa);
    std::vector<cdouble> dark_rho(snap.omega_s.size());
    for (std::size_t i = 0; i < dark_rho.size(); ++i) dark_rho[i] = -snap.omega_s[i] / snap.control;
    const auto psi = to_polariton(snap.omega_s, dark_rho, angle.theta, kappa);
    const auto psi_full = to_polariton(snap.omega_s, snap.rho_mp, angle.theta, kappa);
    const auto phi_full = to_bright(snap.omega_s, snap.rho_mp, angle.theta, kappa);
    const auto back = from_polariton(psi_full, phi_full, angle.theta, kappa);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      scale = std::max(scale, std::abs(snap.omega_s[i]));
      dark_err = std::max(dark_err, std::abs(psi[i] * angle.cos - snap.omega_s[i]));
      trip_err = std::max({trip_err, std::abs(back.omega_s[i] - snap.omega_s[i]),
                           std::sqrt(kappa) * std::abs(back.rho_mp[i] - snap.rho_mp[i])});
    }
  }
  dark_err /= scale;
  trip_err /= scale;

  // N(t) = int |Psi|^2 dz changes only by the flux c |Omega_s|^2 through the faces.
  const auto& d = o.run->detector;
  const double ta = snaps.front().time, tb = snaps.back().time;
  const auto ia = static_cast<std::size_t>(std::llround(ta / d.dt));
  const auto ib = static_cast<std::size_t>(std::llround(tb / d.dt));
  auto trapz_flux = [&](const std::vector<cdouble>& v) {
    double sum = 0.0;
    for (std::size_t k = ia; k < ib; ++k) sum += 0.5 * (std::norm(v[k]) + std::norm(v[k + 1])) * d.dt;
    return s.medium.c_light * sum;
  };
  const double na = polariton_number(snaps.front(), kappa);
  const double nb = polariton_number(snaps.back(), kappa);
  const double expected = na + trapz_flux(d.input) - trapz_flux(d.field);
  const double drift = std::abs(nb / expected - 1.0);

  const bool dark_ok = dark_err <= 1e-12;
  const bool trip_ok = trip_err <= 1e-12;
  const bool norm_ok = drift < 0.01;
  return {dark_ok && trip_ok && norm_ok,
          fmt("dark-state |Psi cos(theta) - Omega_s| = %.2g (<= 1e-12) [%s]; round trip = %.2g (<= 1e-12) [%s]; "
              "polariton number %.2f us -> %.2f us changes by %.3f%% beyond boundary flux (< 1%%) [%s]",
              dark_err, mark(dark_ok), trip_err, mark(trip_ok), ta, tb, 100.0 * drift, mark(norm_ok))};
}

// 9. Numerical hygiene.
Verdict numerical_hygiene() {
  Scenario s = builtin_scenario("storage-50us");
  s.snapshot_times.clear();
  const auto coarse = run_scenario(s);
  const auto again = run_scenario(s);

  Scenario fine = s;
  fine.grid.nz = 2 * s.grid.nz - 1;
  fine.grid.dt = 0.5 * s.grid.dt;
  const auto refined = run_scenario(fine);
  const double l2_coarse = std::sqrt(energy(coarse.run->detector.field, s.grid.dt));
  const double l2_fine = std::sqrt(energy(refined.run->detector.field, fine.grid.dt));
  const double grid_change = std::abs(l2_fine / l2_coarse - 1.0);

  Scenario weak = s;
  weak.pulse.amplitude = 0.3 * s.pulse.amplitude;
  const auto scaled = run_scenario(weak);
  double lin = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < coarse.run->detector.size(); ++k) {
    lin = std::max(lin, std::abs(scaled.run->detector.field[k] / 0.3 - coarse.run->detector.field[k]));
    peak = std::max(peak, std::abs(coarse.run->detector.field[k]));
  }
  lin /= peak;

  const bool grid_ok = grid_change < 0.01;
  const bool lin_ok = lin <= 1e-10;
  const bool bitwise = coarse.run->detector.field == again.run->detector.field &&
                       coarse.run->detector.intensity == again.run->detector.intensity;
  return {grid_ok && lin_ok && bitwise,
          fmt("grid halving changes detector L2 norm by %.3f%% (< 1%%) [%s]; linearity error %.2g (<= 1e-10) [%s]; "
              "repeat run bitwise identical [%s]",
              100.0 * grid_change, mark(grid_ok), lin, mark(lin_ok), mark(bitwise))};
}

struct Criterion {
  const char* title;
  std::function<Verdict()> check;
};

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> table = {
      {1, {"spectrum shape", spectrum_shape}},
      {2, {"slow-light delay", slow_light_delay}},
      {3, {"compression", compression}},
      {4, {"storage phenomenology", storage_phenomenology}},
      {5, {"decay constant", decay_constant}},
      {6, {"oracle equivalence", oracle_equivalence}},
      {7, {"adiabaticity breakdown", adiabaticity_breakdown}},
      {8, {"analytic identities", identities}},
      {9, {"numerical hygiene", numerical_hygiene}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("-n,--criterion", selected, "criterion number(s) to run; default all")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (const auto& [n, c] : criteria()) selected.push_back(n);

  int failed = 0;
  for (int n : selected) {
    const auto& c = criteria().at(n);
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", n, c.title, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
