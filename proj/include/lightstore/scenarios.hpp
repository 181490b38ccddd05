#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lightstore/mbsolver.hpp"
#include "lightstore/numeric.hpp"
#include "lightstore/polariton.hpp"
#include "lightstore/spectrum.hpp"

namespace lightstore {

/// Declarative control field: a constant drive, the storage protocol, or an
/// explicit segment list.
struct ControlSpec {
  enum class Mode { Constant, Storage, Segments };

  Mode mode = Mode::Storage;
  double omega_on = 0.0;                ///< rad/us
  double t_off = 67.0;                  ///< switch-off start, us
  double ramp = 3.0;                    ///< raised-cosine duration, us
  double tau = 50.0;                    ///< dark interval, us
  std::optional<double> omega_release;  ///< defaults to omega_on
  std::vector<ControlSegment> segments;

  ControlSchedule build(double t_end) const;

  bool operator==(const ControlSpec&) const = default;
};

struct SpectrumSpec {
  double b_min = -40.0;  ///< mG
  double b_max = 40.0;   ///< mG
  std::size_t points = 401;
  std::optional<double> omega_c;      ///< fixed control, rad/us
  std::optional<double> fwhm_target;  ///< calibrate control to this width, rad/us

  bool operator==(const SpectrumSpec&) const = default;
};

struct OracleSpec {
  enum class Kind { None, Polariton, VacuumReference, MatchedStorage };

  Kind kind = Kind::None;
  // Dynamic-storage comparison for MatchedStorage.
  double omega_on = 0.0;
  double t_off = 67.0;
  double ramp = 3.0;

  bool operator==(const OracleSpec&) const = default;
};

struct Scenario {
  enum class Kind { Propagation, Spectrum };

  std::string name;
  std::string description;
  Kind kind = Kind::Propagation;
  MediumParams medium;
  Detuning detuning;
  bool decay_on = true;
  ControlSpec control;
  SignalPulseSpec pulse;
  Grid grid;  ///< t_max <= 0 selects an automatic run window
  std::vector<double> snapshot_times;
  OracleSpec oracle;
  SpectrumSpec spectrum;

  double resolved_t_max() const;
  ControlSchedule schedule() const;
  Grid resolved_grid() const;

  bool operator==(const Scenario&) const = default;
};

std::vector<std::string> scenario_names();

/// Throws ValidationError for unknown names.
Scenario builtin_scenario(std::string_view name);

/// Default medium with the control calibrated to v_g = 0.1 cm/us.
Scenario default_scenario();

struct OracleComparison {
  OracleSpec::Kind kind = OracleSpec::Kind::None;
  double relative_l2_error = 0.0;       ///< Polariton: solver vs analytic release
  std::vector<cdouble> analytic;        ///< Polariton: analytic Omega_s(L, t)
  double stored_fraction = 0.0;
  bool truncated = false;
  double matched_tau = 0.0;             ///< MatchedStorage
  double energy_ratio = 0.0;            ///< MatchedStorage: cw output / dynamic peak II
};

struct ScenarioOutcome {
  std::string name;
  Scenario::Kind kind = Scenario::Kind::Propagation;
  std::optional<RunResult> run;
  std::optional<RunResult> reference;
  std::optional<OracleComparison> comparison;
  AdiabaticityReport adiabaticity;
  double kappa = 0.0;
  double initial_control = 0.0;
  double initial_group_velocity = 0.0;
  std::vector<SpectrumPoint> spectrum;
  double spectrum_fwhm = 0.0;  ///< rad/us
  std::vector<std::string> warnings;
};

ScenarioOutcome run_scenario(const Scenario& scenario);

enum class SweepMetric { Efficiency, Delay, Width };

struct SweepSpec {
  std::string scenario;
  std::string axis;
  std::vector<double> values;
  SweepMetric metric = SweepMetric::Efficiency;
  unsigned parallel = 1;
};

struct SweepRow {
  double value = 0.0;
  double metric = 0.0;
};

struct SweepResult {
  std::string axis;
  SweepMetric metric = SweepMetric::Efficiency;
  std::vector<SweepRow> rows;
  std::optional<numeric::LinearFit> fit;
  std::optional<double> coherence_time;  ///< tau sweeps: -2 / slope of ln(efficiency)
  std::string fit_description;
};

/// Sets the parameter at `path` (e.g. "schedule.tau", "medium.density") in
/// internal units. Throws ValidationError for unknown paths.
void apply_parameter(Scenario& scenario, std::string_view path, double value);
std::vector<std::string> sweep_axes();

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec);
SweepResult run_sweep(const SweepSpec& spec);

std::string_view to_string(SweepMetric metric);
SweepMetric parse_metric(std::string_view text);

}  // namespace lightstore
