#include "lightstore/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <random>

#include <json.hpp>

#include "lightstore/error.hpp"
#include "lightstore/polariton.hpp"
#include "lightstore/units.hpp"

namespace lightstore::io {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_atomic(const fs::path& path, std::string_view content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());

  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw Error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

namespace {

void row(std::string& out, std::initializer_list<double> values, char sep = ',') {
  bool first = true;
  for (double v : values) {
    if (!first) out += sep;
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

template <class T>
ordered_json optional_number(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json adiabaticity_object(const AdiabaticityReport& r) {
  ordered_json j;
  j["bandwidth_rad_us"] = r.bandwidth;
  j["window_rad_us"] = r.window;
  j["ratio"] = r.ratio;
  j["optical_depth"] = r.optical_depth;
  j["pulse_length_cm"] = r.pulse_length_cm;
  j["absorption_length_cm"] = r.absorption_length_cm;
  j["propagation_distance_cm"] = r.propagation_distance_cm;
  j["adiabatic"] = r.adiabatic;
  j["warning"] = r.warning;
  return j;
}

std::string_view oracle_name(OracleSpec::Kind kind) {
  switch (kind) {
    case OracleSpec::Kind::None: return "none";
    case OracleSpec::Kind::Polariton: return "polariton";
    case OracleSpec::Kind::VacuumReference: return "vacuum-reference";
    case OracleSpec::Kind::MatchedStorage: return "matched-storage";
  }
  return "none";
}

}  // namespace

std::string detector_csv(const DetectorSeries& d, std::size_t stride) {
  if (stride == 0) throw ValidationError("detector stride must be >= 1");
  std::string out = "t_us,intensity,control_rabi\n";
  for (std::size_t i = 0; i < d.size(); i += stride) row(out, {d.t[i], d.intensity[i], d.control[i]});
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumPoint>& spectrum) {
  std::string out = "b_field_mG,delta_rad_per_us,transmission\n";
  for (const auto& p : spectrum) row(out, {p.b_field_mG, p.delta, p.transmission});
  return out;
}

std::string snapshot_csv(const FieldState& s, double kappa) {
  const auto angle = mixing_angle(s.control, kappa);
  const auto psi = to_polariton(s.omega_s, s.rho_mp, angle.theta, kappa);
  std::string out =
      "z_cm,omega_s_re,omega_s_im,rho_ep_re,rho_ep_im,rho_mp_re,rho_mp_im,psi_re,psi_im\n";
  for (std::size_t j = 0; j < s.omega_s.size(); ++j)
    row(out, {static_cast<double>(j) * s.dz, s.omega_s[j].real(), s.omega_s[j].imag(), s.rho_ep[j].real(),
              s.rho_ep[j].imag(), s.rho_mp[j].real(), s.rho_mp[j].imag(), psi[j].real(), psi[j].imag()});
  return out;
}

std::string adiabaticity_json(const AdiabaticityReport& report) {
  return adiabaticity_object(report).dump(2) + "\n";
}

std::string summary_json(const Scenario& scenario, const ScenarioOutcome& o) {
  ordered_json j;
  j["scenario"] = o.name;
  j["description"] = scenario.description;
  j["kind"] = o.kind == Scenario::Kind::Spectrum ? "spectrum" : "propagation";

  const auto derived = absorption_profile(scenario.medium);
  j["medium"] = {
      {"density_per_cm3", scenario.medium.density},
      {"wavelength_cm", scenario.medium.wavelength},
      {"length_cm", scenario.medium.length},
      {"gamma_r_rad_per_us", scenario.medium.gamma_r},
      {"gamma_opt_rad_per_us", scenario.medium.gamma_opt},
      {"gamma_0_per_us", scenario.medium.gamma_0},
      {"kappa_rad2_per_us2", derived.kappa},
      {"alpha_per_cm", derived.alpha},
      {"optical_depth", derived.optical_depth},
  };
  j["control_rabi_initial_rad_per_us"] = o.initial_control;
  j["group_velocity_initial_cm_per_us"] = o.initial_group_velocity;
  j["adiabaticity"] = adiabaticity_object(o.adiabaticity);

  if (o.kind == Scenario::Kind::Spectrum) {
    j["spectrum"] = {
        {"fwhm_rad_per_us", o.spectrum_fwhm},
        {"fwhm_khz", units::rate_to_khz(o.spectrum_fwhm)},
        {"fwhm_mG", detuning_to_b_field(o.spectrum_fwhm)},
        {"points", o.spectrum.size()},
    };
  }

  if (o.run) {
    const auto& r = *o.run;
    const auto& ob = r.observables;
    const Grid grid = scenario.resolved_grid();
    j["grid"] = {{"nz", grid.nz},
                 {"dt_us", grid.dt},
                 {"dz_cm", grid.dz(scenario.medium.length)},
                 {"t_max_us", grid.t_max}};
    ordered_json obs;
    obs["input_energy_rad2_per_us"] = ob.input_energy;
    obs["output_energy_rad2_per_us"] = ob.output_energy;
    obs["transmission_fraction"] = ob.transmission;
    obs["output_centroid_us"] = ob.output_centroid;
    obs["delay_us"] = optional_number(ob.delay);
    obs["compression_ratio"] = optional_number(ob.compression_ratio);
    obs["retrieval_efficiency_fraction"] = optional_number(ob.retrieval_efficiency);
    obs["peak_I_energy_rad2_per_us"] = ob.peak_I_energy;
    obs["peak_II_energy_rad2_per_us"] = ob.peak_II_energy;
    obs["peak_I_amplitude_rad_per_us"] = ob.peak_I_amplitude;
    obs["peak_II_amplitude_rad_per_us"] = ob.peak_II_amplitude;
    j["observables"] = obs;
    if (r.storage) {
      j["storage"] = {{"t0_us", r.storage->t0},
                      {"t1_us", r.storage->t1},
                      {"t2_us", optional_number(r.storage->t2)},
                      {"tau_us", r.storage->tau()}};
    }
    ordered_json snaps = ordered_json::array();
    for (const auto& s : r.snapshots) snaps.push_back(s.time);
    j["snapshot_times_us"] = snaps;
  }

  if (o.comparison) {
    const auto& c = *o.comparison;
    ordered_json cj;
    cj["kind"] = oracle_name(c.kind);
    switch (c.kind) {
      case OracleSpec::Kind::Polariton:
        cj["relative_l2_error_fraction"] = c.relative_l2_error;
        cj["stored_fraction"] = c.stored_fraction;
        cj["truncated"] = c.truncated;
        break;
      case OracleSpec::Kind::MatchedStorage:
        cj["matched_tau_us"] = c.matched_tau;
        cj["energy_ratio"] = c.energy_ratio;
        if (o.reference) cj["reference_peak_II_energy_rad2_per_us"] = o.reference->observables.peak_II_energy;
        break;
      case OracleSpec::Kind::VacuumReference:
        if (o.reference) cj["reference_centroid_us"] = o.reference->observables.output_centroid;
        break;
      case OracleSpec::Kind::None:
        break;
    }
    j["oracle"] = cj;
  }

  j["warnings"] = o.warnings;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = r.axis + "," + std::string(to_string(r.metric)) + "\n";
  for (const auto& row_ : r.rows) row(out, {row_.value, row_.metric});
  return out;
}

std::string sweep_json(const SweepResult& r, std::string_view scenario) {
  ordered_json j;
  j["scenario"] = scenario;
  j["axis"] = r.axis;
  j["metric"] = to_string(r.metric);
  ordered_json rows = ordered_json::array();
  for (const auto& row_ : r.rows) rows.push_back({{"value", row_.value}, {"metric", row_.metric}});
  j["rows"] = rows;
  if (r.fit) {
    j["fit"] = {{"description", r.fit_description},
                {"slope", r.fit->slope},
                {"intercept", r.fit->intercept},
                {"r_squared", r.fit->r_squared}};
  }
  j["coherence_time_us"] = optional_number(r.coherence_time);
  return j.dump(2) + "\n";
}

std::string detector_plot_data(const DetectorSeries& d, std::size_t stride) {
  if (stride == 0) throw ValidationError("detector stride must be >= 1");
  std::string out = "# t_us output_intensity input_intensity control_rabi\n";
  for (std::size_t i = 0; i < d.size(); i += stride)
    row(out, {d.t[i], d.intensity[i], std::norm(d.input[i]), d.control[i]}, ' ');
  return out;
}

std::string spectrum_plot_data(const std::vector<SpectrumPoint>& spectrum) {
  std::string out = "# b_field_mG transmission\n";
  for (const auto& p : spectrum) row(out, {p.b_field_mG, p.transmission}, ' ');
  return out;
}

}  // namespace lightstore::io
