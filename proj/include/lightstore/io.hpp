#pragma once

// Output emission. Numbers are written with the shortest round-trip
// representation (locale independent); lines end in LF.

#include <filesystem>
#include <string>
#include <string_view>

#include "lightstore/scenarios.hpp"

namespace lightstore::io {

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string format_number(double v);

/// t_us,intensity,control_rabi; every `stride`-th sample.
std::string detector_csv(const DetectorSeries& detector, std::size_t stride = 1);

/// b_field_mG,delta_rad_per_us,transmission
std::string spectrum_csv(const std::vector<SpectrumPoint>& spectrum);

/// z_cm and real/imaginary parts of Omega_s, rho_ep, rho_mp and Psi.
std::string snapshot_csv(const FieldState& snapshot, double kappa);

std::string adiabaticity_json(const AdiabaticityReport& report);

/// Every observable of the run, keyed with explicit unit suffixes.
std::string summary_json(const Scenario& scenario, const ScenarioOutcome& outcome);

/// value,metric with the axis and metric named in the header.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result, std::string_view scenario);

/// Whitespace-separated columns with a '#' header, for gnuplot and friends.
std::string detector_plot_data(const DetectorSeries& detector, std::size_t stride = 1);
std::string spectrum_plot_data(const std::vector<SpectrumPoint>& spectrum);

}  // namespace lightstore::io
