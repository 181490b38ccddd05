#pragma once

// Run configuration: a flat, sectioned key/value text format.
//
//   [run]
//   scenario = storage-50us
//   [medium]
//   lambda = 795 nm
//   density = 1e12 cm^-3
//   [schedule]
//   segment = ramp, 67 us, 70 us, 52.2 rad/us, 0 rad/us
//
// Lines starting with '#' or ';' are comments. Every physical value carries a
// unit; values are converted to internal units (cm, us, rad/us) on load.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lightstore/error.hpp"
#include "lightstore/scenarios.hpp"

namespace lightstore {

enum class Dimension { None, Length, Density, Time, Rate, Field, Velocity };

struct ConfigIssue {
  enum class Kind { Syntax, Unit, Range, Schema };

  Kind kind = Kind::Syntax;
  std::size_t line = 0;    ///< 1-based; 0 when not tied to a line
  std::size_t column = 0;  ///< 1-based
  std::string key;         ///< "section.key" when known
  std::string message;
};

std::string format_issue(const ConfigIssue& issue);

/// Carries every problem found in a configuration, not just the first.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct OutputOptions {
  std::string directory = ".";
  bool detector_csv = true;
  bool snapshot_files = true;
  bool summary_json = true;
  bool plot_data = false;
  std::size_t detector_stride = 1;

  bool operator==(const OutputOptions&) const = default;
};

struct SweepConfig {
  std::string axis;
  std::vector<double> values;  ///< internal units of the axis
  SweepMetric metric = SweepMetric::Efficiency;
  unsigned parallel = 1;

  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  std::optional<std::string> base_scenario;  ///< builtin the overrides start from
  Scenario scenario;
  std::optional<SweepConfig> sweep;
  OutputOptions output;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a configuration. Throws ConfigError listing all issues.
RunConfig parse_config(std::string_view text);

/// Emits the effective configuration; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Configuration equivalent to a builtin scenario with no overrides.
RunConfig config_for_scenario(std::string_view name);

/// "795 nm" -> 7.95e-5 (cm). A bare number is accepted only when
/// `bare_is_internal` is set or the dimension is None. Throws ConfigError.
double parse_quantity(std::string_view text, Dimension dim, bool bare_is_internal = false);

/// Dimension of a sweep axis (see sweep_axes()).
Dimension axis_dimension(std::string_view axis);

}  // namespace lightstore
