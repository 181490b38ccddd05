#include "lightstore/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lightstore/units.hpp"

namespace lightstore {

namespace {

struct UnitDef {
  std::string_view name;
  Dimension dim;
  double scale;
};

constexpr double kHz = units::kTwoPi * 1e-6;

constexpr std::array kUnits{
    UnitDef{"cm", Dimension::Length, 1.0},
    UnitDef{"m", Dimension::Length, 100.0},
    UnitDef{"mm", Dimension::Length, 0.1},
    UnitDef{"um", Dimension::Length, 1e-4},
    UnitDef{"nm", Dimension::Length, 1e-7},
    UnitDef{"cm^-3", Dimension::Density, 1.0},
    UnitDef{"m^-3", Dimension::Density, 1e-6},
    UnitDef{"us", Dimension::Time, 1.0},
    UnitDef{"\xC2\xB5s", Dimension::Time, 1.0},
    UnitDef{"\xCE\xBCs", Dimension::Time, 1.0},
    UnitDef{"ns", Dimension::Time, 1e-3},
    UnitDef{"ms", Dimension::Time, 1e3},
    UnitDef{"s", Dimension::Time, 1e6},
    UnitDef{"rad/us", Dimension::Rate, 1.0},
    UnitDef{"rad/s", Dimension::Rate, 1e-6},
    UnitDef{"1/us", Dimension::Rate, 1.0},
    UnitDef{"1/s", Dimension::Rate, 1e-6},
    UnitDef{"us^-1", Dimension::Rate, 1.0},
    UnitDef{"s^-1", Dimension::Rate, 1e-6},
    UnitDef{"Hz", Dimension::Rate, kHz},
    UnitDef{"kHz", Dimension::Rate, kHz * 1e3},
    UnitDef{"MHz", Dimension::Rate, kHz * 1e6},
    UnitDef{"mG", Dimension::Field, 1.0},
    UnitDef{"G", Dimension::Field, 1e3},
    UnitDef{"cm/us", Dimension::Velocity, 1.0},
    UnitDef{"m/s", Dimension::Velocity, 1e-4},
    UnitDef{"km/s", Dimension::Velocity, 0.1},
};

std::string_view internal_unit(Dimension dim) {
  switch (dim) {
    case Dimension::None: return "";
    case Dimension::Length: return "cm";
    case Dimension::Density: return "cm^-3";
    case Dimension::Time: return "us";
    case Dimension::Rate: return "rad/us";
    case Dimension::Field: return "mG";
    case Dimension::Velocity: return "cm/us";
  }
  return "";
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::None: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Density: return "number density";
    case Dimension::Time: return "time";
    case Dimension::Rate: return "rate";
    case Dimension::Field: return "magnetic field";
    case Dimension::Velocity: return "velocity";
  }
  return "";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

// Collects issues for one entry; offsets are relative to the value column.
struct Sink {
  std::vector<ConfigIssue>& issues;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string key;

  void add(ConfigIssue::Kind kind, std::string message, std::size_t col_offset = 0) {
    issues.push_back({kind, line, column + col_offset, key, std::move(message)});
  }
};

std::optional<double> parse_number(std::string_view text, std::size_t& used) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr == body.data()) return std::nullopt;
  used = static_cast<std::size_t>(ptr - text.data());
  return v;
}

// Parses "<number> [unit]" from `text`, which starts `col` columns into the value.
std::optional<double> quantity(std::string_view raw, Dimension dim, Sink& sink, std::size_t col,
                               bool bare_is_internal = false) {
  const auto first = raw.find_first_not_of(" \t");
  const std::size_t lead = first == std::string_view::npos ? raw.size() : first;
  const std::string_view text = trim(raw);
  col += lead;
  if (text.empty()) {
    sink.add(ConfigIssue::Kind::Syntax, "missing value", col);
    return std::nullopt;
  }
  std::size_t used = 0;
  const auto number = parse_number(text, used);
  if (!number) {
    sink.add(ConfigIssue::Kind::Syntax, "expected a number, got '" + std::string(text) + "'", col);
    return std::nullopt;
  }
  if (!std::isfinite(*number)) {
    sink.add(ConfigIssue::Kind::Range, "value must be finite", col);
    return std::nullopt;
  }
  const std::string_view unit = trim(text.substr(used));
  if (unit.empty()) {
    if (dim == Dimension::None || bare_is_internal) return *number;
    sink.add(ConfigIssue::Kind::Unit,
             "missing unit (expected a " + std::string(dimension_name(dim)) + ", e.g. '" +
                 std::string(internal_unit(dim)) + "')",
             col + used);
    return std::nullopt;
  }
  for (const auto& u : kUnits) {
    if (u.name != unit) continue;
    if (u.dim != dim) {
      sink.add(ConfigIssue::Kind::Unit,
               "unit '" + std::string(unit) + "' is a " + std::string(dimension_name(u.dim)) +
                   ", expected " + std::string(dimension_name(dim)),
               col + used);
      return std::nullopt;
    }
    return *number * u.scale;
  }
  sink.add(ConfigIssue::Kind::Unit, "unknown unit '" + std::string(unit) + "'", col + used);
  return std::nullopt;
}

std::optional<bool> boolean(std::string_view raw, Sink& sink) {
  const auto text = trim(raw);
  if (text == "on" || text == "true" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "no") return false;
  sink.add(ConfigIssue::Kind::Syntax, "expected on/off, got '" + std::string(text) + "'");
  return std::nullopt;
}

std::optional<std::size_t> count(std::string_view raw, Sink& sink, std::size_t min) {
  const auto text = trim(raw);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    sink.add(ConfigIssue::Kind::Syntax, "expected a non-negative integer, got '" + std::string(text) + "'");
    return std::nullopt;
  }
  if (v < min) {
    sink.add(ConfigIssue::Kind::Range, "must be >= " + std::to_string(min));
    return std::nullopt;
  }
  return v;
}

enum class Bound { Any, NonNegative, Positive };

bool in_range(double v, Bound bound, Sink& sink) {
  if (bound == Bound::NonNegative && v < 0.0) {
    sink.add(ConfigIssue::Kind::Range, "must be >= 0, got " + format_number(v));
    return false;
  }
  if (bound == Bound::Positive && !(v > 0.0)) {
    sink.add(ConfigIssue::Kind::Range, "must be > 0, got " + format_number(v));
    return false;
  }
  return true;
}

struct Entry {
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
  std::string section;
  std::string key;
  std::string value;
};

using Setter = std::function<void(RunConfig&, const Entry&, Sink&)>;

Setter number_key(Dimension dim, Bound bound, std::function<void(RunConfig&, double)> set) {
  return [=](RunConfig& c, const Entry& e, Sink& sink) {
    if (const auto v = quantity(e.value, dim, sink, 0); v && in_range(*v, bound, sink)) set(c, *v);
  };
}

std::optional<ControlSegment> parse_segment(const Entry& e, Sink& sink) {
  const auto parts = split(e.value, ',');
  std::vector<std::size_t> cols;
  std::size_t pos = 0;
  for (const auto& p : parts) {
    cols.push_back(pos);
    pos += p.size() + 1;
  }
  const auto kind = trim(parts[0]);
  ControlSegment seg;
  std::size_t expected = 0;
  if (kind == "const") {
    seg.shape = ControlSegment::Shape::Constant;
    expected = 4;
  } else if (kind == "ramp") {
    seg.shape = ControlSegment::Shape::Ramp;
    expected = 5;
  } else {
    sink.add(ConfigIssue::Kind::Syntax, "segment kind must be 'const' or 'ramp'");
    return std::nullopt;
  }
  if (parts.size() != expected) {
    sink.add(ConfigIssue::Kind::Syntax,
             std::string(kind) + " segment takes " + std::to_string(expected - 1) +
                 " comma-separated values: t_start, t_end, " +
                 (expected == 4 ? "omega" : "omega_from, omega_to"));
    return std::nullopt;
  }
  const auto t0 = quantity(parts[1], Dimension::Time, sink, cols[1]);
  const auto t1 = quantity(parts[2], Dimension::Time, sink, cols[2]);
  const auto w0 = quantity(parts[3], Dimension::Rate, sink, cols[3]);
  const auto w1 = expected == 5 ? quantity(parts[4], Dimension::Rate, sink, cols[4]) : w0;
  if (!t0 || !t1 || !w0 || !w1) return std::nullopt;
  if (!in_range(*w0, Bound::NonNegative, sink) || !in_range(*w1, Bound::NonNegative, sink)) return std::nullopt;
  if (!(*t1 > *t0)) {
    sink.add(ConfigIssue::Kind::Range, "segment needs t_end > t_start");
    return std::nullopt;
  }
  seg.t_start = *t0;
  seg.t_end = *t1;
  seg.from = *w0;
  seg.to = *w1;
  return seg;
}

std::optional<std::vector<double>> time_list(std::string_view value, Sink& sink) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  std::size_t col = 0;
  bool ok = true;
  for (const auto part : split(value, ',')) {
    const auto v = quantity(part, Dimension::Time, sink, col);
    if (v && in_range(*v, Bound::NonNegative, sink)) out.push_back(*v);
    else ok = false;
    col += part.size() + 1;
  }
  if (!ok) return std::nullopt;
  return out;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  using D = Dimension;
  using K = ConfigIssue::Kind;
  static const std::map<std::string, Setter, std::less<>> table = {
      {"run.name", [](RunConfig& c, const Entry& e, Sink&) { c.scenario.name = std::string(trim(e.value)); }},
      {"run.description",
       [](RunConfig& c, const Entry& e, Sink&) { c.scenario.description = std::string(trim(e.value)); }},
      {"run.kind",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = trim(e.value);
         if (v == "propagation") c.scenario.kind = Scenario::Kind::Propagation;
         else if (v == "spectrum") c.scenario.kind = Scenario::Kind::Spectrum;
         else sink.add(K::Range, "kind must be 'propagation' or 'spectrum'");
       }},
      {"run.snapshots",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (auto v = time_list(e.value, sink)) c.scenario.snapshot_times = std::move(*v);
       }},

      {"medium.density", number_key(D::Density, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.medium.density = v; })},
      {"medium.lambda", number_key(D::Length, Bound::Positive, [](RunConfig& c, double v) { c.scenario.medium.wavelength = v; })},
      {"medium.gamma_r", number_key(D::Rate, Bound::Positive, [](RunConfig& c, double v) { c.scenario.medium.gamma_r = v; })},
      {"medium.gamma_opt", number_key(D::Rate, Bound::Positive, [](RunConfig& c, double v) { c.scenario.medium.gamma_opt = v; })},
      {"medium.gamma_0", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.medium.gamma_0 = v; })},
      {"medium.length", number_key(D::Length, Bound::Positive, [](RunConfig& c, double v) { c.scenario.medium.length = v; })},
      {"medium.speed_of_light", number_key(D::Velocity, Bound::Positive, [](RunConfig& c, double v) { c.scenario.medium.c_light = v; })},
      {"medium.b_field", number_key(D::Field, Bound::Any, [](RunConfig& c, double v) { c.scenario.detuning.two_photon = b_field_to_detuning(v); })},
      {"medium.two_photon_detuning", number_key(D::Rate, Bound::Any, [](RunConfig& c, double v) { c.scenario.detuning.two_photon = v; })},
      {"medium.one_photon_detuning", number_key(D::Rate, Bound::Any, [](RunConfig& c, double v) { c.scenario.detuning.one_photon = v; })},
      {"medium.decay",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = boolean(e.value, sink)) c.scenario.decay_on = *v;
       }},

      {"schedule.mode",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = trim(e.value);
         if (v == "constant") c.scenario.control.mode = ControlSpec::Mode::Constant;
         else if (v == "storage") c.scenario.control.mode = ControlSpec::Mode::Storage;
         else if (v == "segments") c.scenario.control.mode = ControlSpec::Mode::Segments;
         else sink.add(K::Range, "mode must be 'constant', 'storage' or 'segments'");
       }},
      {"schedule.omega_on", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.control.omega_on = v; })},
      {"schedule.group_velocity",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = quantity(e.value, D::Velocity, sink, 0);
         if (!v || !in_range(*v, Bound::Positive, sink)) return;
         try {
           c.scenario.control.omega_on =
               control_for_group_velocity(*v, compute_kappa(c.scenario.medium), c.scenario.medium.c_light);
         } catch (const ValidationError& err) {
           sink.add(K::Range, err.what());
         }
       }},
      {"schedule.t_off", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.control.t_off = v; })},
      {"schedule.ramp", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.control.ramp = v; })},
      {"schedule.tau", number_key(D::Time, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.control.tau = v; })},
      {"schedule.omega_release", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.control.omega_release = v; })},
      {"schedule.segment",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto seg = parse_segment(e, sink)) c.scenario.control.segments.push_back(*seg);
       }},

      {"pulse.shape",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = trim(e.value);
         if (v == "gaussian") c.scenario.pulse.shape = SignalPulseSpec::Shape::Gaussian;
         else if (v == "cw") c.scenario.pulse.shape = SignalPulseSpec::Shape::Cw;
         else sink.add(K::Range, "shape must be 'gaussian' or 'cw'");
       }},
      {"pulse.center", number_key(D::Time, Bound::Any, [](RunConfig& c, double v) { c.scenario.pulse.center = v; })},
      {"pulse.duration", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.pulse.duration = v; })},
      {"pulse.amplitude", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.pulse.amplitude = v; })},

      {"grid.nz",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = count(e.value, sink, 64)) c.scenario.grid.nz = *v;
       }},
      {"grid.dt", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.grid.dt = v; })},
      {"grid.t_max",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (trim(e.value) == "auto") {
           c.scenario.grid.t_max = 0.0;
           return;
         }
         if (const auto v = quantity(e.value, D::Time, sink, 0); v && in_range(*v, Bound::Positive, sink))
           c.scenario.grid.t_max = *v;
       }},

      {"spectrum.b_min", number_key(D::Field, Bound::Any, [](RunConfig& c, double v) { c.scenario.spectrum.b_min = v; })},
      {"spectrum.b_max", number_key(D::Field, Bound::Any, [](RunConfig& c, double v) { c.scenario.spectrum.b_max = v; })},
      {"spectrum.points",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = count(e.value, sink, 2)) c.scenario.spectrum.points = *v;
       }},
      {"spectrum.omega_c", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.spectrum.omega_c = v; })},
      {"spectrum.fwhm_target", number_key(D::Rate, Bound::Positive, [](RunConfig& c, double v) { c.scenario.spectrum.fwhm_target = v; })},

      {"oracle.kind",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = trim(e.value);
         using OK = OracleSpec::Kind;
         if (v == "none") c.scenario.oracle.kind = OK::None;
         else if (v == "polariton") c.scenario.oracle.kind = OK::Polariton;
         else if (v == "vacuum-reference") c.scenario.oracle.kind = OK::VacuumReference;
         else if (v == "matched-storage") c.scenario.oracle.kind = OK::MatchedStorage;
         else sink.add(K::Range, "kind must be one of none, polariton, vacuum-reference, matched-storage");
       }},
      {"oracle.omega_on", number_key(D::Rate, Bound::NonNegative, [](RunConfig& c, double v) { c.scenario.oracle.omega_on = v; })},
      {"oracle.t_off", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.oracle.t_off = v; })},
      {"oracle.ramp", number_key(D::Time, Bound::Positive, [](RunConfig& c, double v) { c.scenario.oracle.ramp = v; })},

      {"sweep.axis",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = std::string(trim(e.value));
         const auto axes = sweep_axes();
         if (std::find(axes.begin(), axes.end(), v) == axes.end()) {
           sink.add(K::Range, "unknown sweep axis '" + v + "'");
           return;
         }
         if (!c.sweep) c.sweep.emplace();
         c.sweep->axis = v;
       }},
      {"sweep.values", [](RunConfig&, const Entry&, Sink&) {}},  // resolved once the axis is known
      {"sweep.metric",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         try {
           const auto m = parse_metric(trim(e.value));
           if (!c.sweep) c.sweep.emplace();
           c.sweep->metric = m;
         } catch (const ValidationError& err) {
           sink.add(K::Range, err.what());
         }
       }},
      {"sweep.parallel",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = count(e.value, sink, 1)) {
           if (!c.sweep) c.sweep.emplace();
           c.sweep->parallel = static_cast<unsigned>(*v);
         }
       }},

      {"output.directory",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         const auto v = trim(e.value);
         if (v.empty()) sink.add(K::Range, "directory must not be empty");
         else c.output.directory = std::string(v);
       }},
      {"output.detector_csv",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = boolean(e.value, sink)) c.output.detector_csv = *v;
       }},
      {"output.snapshot_files",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = boolean(e.value, sink)) c.output.snapshot_files = *v;
       }},
      {"output.summary_json",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = boolean(e.value, sink)) c.output.summary_json = *v;
       }},
      {"output.plot_data",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = boolean(e.value, sink)) c.output.plot_data = *v;
       }},
      {"output.detector_stride",
       [](RunConfig& c, const Entry& e, Sink& sink) {
         if (const auto v = count(e.value, sink, 1)) c.output.detector_stride = *v;
       }},
  };
  return table;
}

const std::set<std::string, std::less<>> kSections = {"run",  "medium", "schedule", "pulse", "grid",
                                                      "spectrum", "oracle", "sweep", "output"};

std::vector<Entry> tokenize(std::string_view text, std::vector<ConfigIssue>& issues) {
  std::vector<Entry> entries;
  std::string section;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == ';') continue;
    const std::size_t indent = static_cast<std::size_t>(body.data() - line.data());
    if (body.front() == '[') {
      if (body.back() != ']') {
        issues.push_back({ConfigIssue::Kind::Syntax, line_no, indent + body.size() + 1, "", "expected ']'"});
        continue;
      }
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (!kSections.contains(section))
        issues.push_back({ConfigIssue::Kind::Schema, line_no, indent + 2, section,
                          "unknown section [" + section + "]"});
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({ConfigIssue::Kind::Syntax, line_no, indent + 1, "", "expected 'key = value'"});
      continue;
    }
    const auto key = trim(body.substr(0, eq));
    if (key.empty()) {
      issues.push_back({ConfigIssue::Kind::Syntax, line_no, indent + 1, "", "missing key before '='"});
      continue;
    }
    if (section.empty()) {
      issues.push_back({ConfigIssue::Kind::Syntax, line_no, indent + 1, std::string(key),
                        "key outside of any [section]"});
      continue;
    }
    Entry e;
    e.line = line_no;
    e.key_column = indent + 1;
    e.value_column = indent + eq + 2;
    e.section = section;
    e.key = std::string(key);
    e.value = std::string(body.substr(eq + 1));
    entries.push_back(std::move(e));
  }
  return entries;
}

void validate_structure(const RunConfig& c, std::vector<ConfigIssue>& issues) {
  auto check = [&](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      issues.push_back({ConfigIssue::Kind::Range, 0, 0, key, e.what()});
    }
  };
  const Scenario& s = c.scenario;
  check("medium", [&] { s.medium.validate(); });
  check("pulse", [&] { s.pulse.validate(); });
  if (s.kind == Scenario::Kind::Propagation) {
    if (s.control.mode == ControlSpec::Mode::Segments && s.control.segments.empty())
      issues.push_back({ConfigIssue::Kind::Range, 0, 0, "schedule.segment",
                        "mode = segments needs at least one segment"});
    else
      check("schedule", [&] { (void)s.schedule(); });
  } else if (!(s.spectrum.b_max > s.spectrum.b_min)) {
    issues.push_back({ConfigIssue::Kind::Range, 0, 0, "spectrum.b_max", "must exceed spectrum.b_min"});
  }
  if (c.sweep) {
    if (c.sweep->axis.empty())
      issues.push_back({ConfigIssue::Kind::Range, 0, 0, "sweep.axis", "missing sweep axis"});
    if (c.sweep->values.empty())
      issues.push_back({ConfigIssue::Kind::Range, 0, 0, "sweep.values", "missing sweep values"});
  }
}

}  // namespace

std::string format_issue(const ConfigIssue& issue) {
  std::string kind;
  switch (issue.kind) {
    case ConfigIssue::Kind::Syntax: kind = "syntax error"; break;
    case ConfigIssue::Kind::Unit: kind = "unit error"; break;
    case ConfigIssue::Kind::Range: kind = "range error"; break;
    case ConfigIssue::Kind::Schema: kind = "schema error"; break;
  }
  std::string out;
  if (issue.line > 0) out += "line " + std::to_string(issue.line) + ":" + std::to_string(issue.column) + ": ";
  out += kind;
  if (!issue.key.empty()) out += " in '" + issue.key + "'";
  return out + ": " + issue.message;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid configuration";
  for (const auto& i : issues) out += "\n  " + format_issue(i);
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(join_issues(issues)), issues_(std::move(issues)) {}

Dimension axis_dimension(std::string_view axis) {
  static const std::map<std::string, Dimension, std::less<>> dims = {
      {"medium.density", Dimension::Density}, {"medium.gamma_0", Dimension::Rate},
      {"medium.gamma_opt", Dimension::Rate},  {"medium.length", Dimension::Length},
      {"medium.b_field", Dimension::Field},   {"schedule.omega_on", Dimension::Rate},
      {"schedule.tau", Dimension::Time},      {"schedule.t_off", Dimension::Time},
      {"schedule.ramp", Dimension::Time},     {"pulse.duration", Dimension::Time},
      {"pulse.amplitude", Dimension::Rate},   {"pulse.center", Dimension::Time},
      {"grid.nz", Dimension::None},           {"grid.dt", Dimension::Time},
  };
  const auto it = dims.find(axis);
  if (it == dims.end()) throw ValidationError("unknown sweep axis '" + std::string(axis) + "'");
  return it->second;
}

double parse_quantity(std::string_view text, Dimension dim, bool bare_is_internal) {
  std::vector<ConfigIssue> issues;
  Sink sink{issues, 0, 1, ""};
  const auto v = quantity(text, dim, sink, 0, bare_is_internal);
  if (!v) throw ConfigError(std::move(issues));
  return *v;
}

RunConfig config_for_scenario(std::string_view name) {
  RunConfig c;
  c.scenario = builtin_scenario(name);
  c.base_scenario = std::string(name);
  return c;
}

RunConfig parse_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  auto entries = tokenize(text, issues);

  RunConfig config;
  config.scenario = default_scenario();
  config.scenario.name = "custom";
  config.scenario.control.mode = ControlSpec::Mode::Storage;

  // The base scenario supplies defaults, so resolve it before any override.
  for (const auto& e : entries) {
    if (e.section != "run" || e.key != "scenario") continue;
    const std::string name(trim(e.value));
    try {
      config.scenario = builtin_scenario(name);
      config.base_scenario = name;
    } catch (const ValidationError&) {
      issues.push_back({ConfigIssue::Kind::Range, e.line, e.value_column, "run.scenario",
                        "unknown scenario '" + name + "'"});
    }
  }

  const auto& table = setters();
  std::map<std::string, std::size_t> seen;
  bool explicit_mode = false;
  bool has_segments = false;
  const Entry* values_entry = nullptr;
  bool b_field = false;
  bool two_photon = false;
  for (const auto& e : entries) {
    const std::string full = e.section + "." + e.key;
    if (!kSections.contains(e.section)) continue;
    if (full == "run.scenario") {
      if (seen[full]++ > 0)
        issues.push_back({ConfigIssue::Kind::Schema, e.line, e.key_column, full, "duplicate key"});
      continue;
    }
    const auto it = table.find(full);
    if (it == table.end()) {
      issues.push_back({ConfigIssue::Kind::Schema, e.line, e.key_column, full, "unknown key '" + e.key + "'"});
      continue;
    }
    if (full != "schedule.segment" && seen[full]++ > 0) {
      issues.push_back({ConfigIssue::Kind::Schema, e.line, e.key_column, full, "duplicate key"});
      continue;
    }
    if (full == "schedule.segment" && !has_segments) {
      has_segments = true;
      config.scenario.control.segments.clear();
    }
    if (full == "schedule.mode") explicit_mode = true;
    if (full == "medium.b_field") b_field = true;
    if (full == "medium.two_photon_detuning") two_photon = true;
    if (full == "sweep.values") values_entry = &e;
    Sink sink{issues, e.line, e.value_column, full};
    it->second(config, e, sink);
  }

  if (b_field && two_photon)
    issues.push_back({ConfigIssue::Kind::Schema, 0, 0, "medium.b_field",
                      "give either b_field or two_photon_detuning, not both"});
  if (has_segments) {
    if (!explicit_mode) config.scenario.control.mode = ControlSpec::Mode::Segments;
    else if (config.scenario.control.mode != ControlSpec::Mode::Segments)
      issues.push_back({ConfigIssue::Kind::Schema, 0, 0, "schedule.segment", "segments require mode = segments"});
  }

  if (values_entry) {
    if (!config.sweep) config.sweep.emplace();
    if (config.sweep->axis.empty()) {
      issues.push_back({ConfigIssue::Kind::Schema, values_entry->line, values_entry->key_column, "sweep.values",
                        "sweep.values needs sweep.axis"});
    } else {
      const Dimension dim = axis_dimension(config.sweep->axis);
      Sink sink{issues, values_entry->line, values_entry->value_column, "sweep.values"};
      std::size_t col = 0;
      for (const auto part : split(values_entry->value, ',')) {
        if (const auto v = quantity(part, dim, sink, col)) config.sweep->values.push_back(*v);
        col += part.size() + 1;
      }
    }
  }

  if (issues.empty()) validate_structure(config, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  const Scenario& s = c.scenario;
  auto q = [](double v, Dimension dim) {
    std::string text = format_number(v);
    const auto unit = internal_unit(dim);
    if (!unit.empty()) text += " " + std::string(unit);
    return text;
  };
  auto onoff = [](bool b) { return b ? "on" : "off"; };

  out << "[run]\n";
  if (c.base_scenario) out << "scenario = " << *c.base_scenario << "\n";
  out << "name = " << s.name << "\n";
  if (!s.description.empty()) out << "description = " << s.description << "\n";
  out << "kind = " << (s.kind == Scenario::Kind::Spectrum ? "spectrum" : "propagation") << "\n";
  if (!s.snapshot_times.empty()) {
    out << "snapshots = ";
    for (std::size_t i = 0; i < s.snapshot_times.size(); ++i)
      out << (i ? ", " : "") << q(s.snapshot_times[i], Dimension::Time);
    out << "\n";
  }

  out << "\n[medium]\n"
      << "density = " << q(s.medium.density, Dimension::Density) << "\n"
      << "lambda = " << q(s.medium.wavelength, Dimension::Length) << "\n"
      << "gamma_r = " << q(s.medium.gamma_r, Dimension::Rate) << "\n"
      << "gamma_opt = " << q(s.medium.gamma_opt, Dimension::Rate) << "\n"
      << "gamma_0 = " << q(s.medium.gamma_0, Dimension::Rate) << "\n"
      << "length = " << q(s.medium.length, Dimension::Length) << "\n"
      << "speed_of_light = " << q(s.medium.c_light, Dimension::Velocity) << "\n"
      << "two_photon_detuning = " << q(s.detuning.two_photon, Dimension::Rate) << "\n"
      << "one_photon_detuning = " << q(s.detuning.one_photon, Dimension::Rate) << "\n"
      << "decay = " << onoff(s.decay_on) << "\n";

  out << "\n[schedule]\n";
  switch (s.control.mode) {
    case ControlSpec::Mode::Constant: out << "mode = constant\n"; break;
    case ControlSpec::Mode::Storage: out << "mode = storage\n"; break;
    case ControlSpec::Mode::Segments: out << "mode = segments\n"; break;
  }
  out << "omega_on = " << q(s.control.omega_on, Dimension::Rate) << "\n"
      << "t_off = " << q(s.control.t_off, Dimension::Time) << "\n"
      << "ramp = " << q(s.control.ramp, Dimension::Time) << "\n"
      << "tau = " << q(s.control.tau, Dimension::Time) << "\n";
  if (s.control.omega_release) out << "omega_release = " << q(*s.control.omega_release, Dimension::Rate) << "\n";
  for (const auto& seg : s.control.segments) {
    if (seg.shape == ControlSegment::Shape::Constant)
      out << "segment = const, " << q(seg.t_start, Dimension::Time) << ", " << q(seg.t_end, Dimension::Time)
          << ", " << q(seg.from, Dimension::Rate) << "\n";
    else
      out << "segment = ramp, " << q(seg.t_start, Dimension::Time) << ", " << q(seg.t_end, Dimension::Time)
          << ", " << q(seg.from, Dimension::Rate) << ", " << q(seg.to, Dimension::Rate) << "\n";
  }

  out << "\n[pulse]\n"
      << "shape = " << (s.pulse.shape == SignalPulseSpec::Shape::Cw ? "cw" : "gaussian") << "\n"
      << "center = " << q(s.pulse.center, Dimension::Time) << "\n"
      << "duration = " << q(s.pulse.duration, Dimension::Time) << "\n"
      << "amplitude = " << q(s.pulse.amplitude, Dimension::Rate) << "\n";

  out << "\n[grid]\n"
      << "nz = " << s.grid.nz << "\n"
      << "dt = " << q(s.grid.dt, Dimension::Time) << "\n"
      << "t_max = " << (s.grid.t_max > 0.0 ? q(s.grid.t_max, Dimension::Time) : std::string("auto")) << "\n";

  out << "\n[spectrum]\n"
      << "b_min = " << q(s.spectrum.b_min, Dimension::Field) << "\n"
      << "b_max = " << q(s.spectrum.b_max, Dimension::Field) << "\n"
      << "points = " << s.spectrum.points << "\n";
  if (s.spectrum.omega_c) out << "omega_c = " << q(*s.spectrum.omega_c, Dimension::Rate) << "\n";
  if (s.spectrum.fwhm_target) out << "fwhm_target = " << q(*s.spectrum.fwhm_target, Dimension::Rate) << "\n";

  out << "\n[oracle]\n";
  switch (s.oracle.kind) {
    case OracleSpec::Kind::None: out << "kind = none\n"; break;
    case OracleSpec::Kind::Polariton: out << "kind = polariton\n"; break;
    case OracleSpec::Kind::VacuumReference: out << "kind = vacuum-reference\n"; break;
    case OracleSpec::Kind::MatchedStorage: out << "kind = matched-storage\n"; break;
  }
  out << "omega_on = " << q(s.oracle.omega_on, Dimension::Rate) << "\n"
      << "t_off = " << q(s.oracle.t_off, Dimension::Time) << "\n"
      << "ramp = " << q(s.oracle.ramp, Dimension::Time) << "\n";

  if (c.sweep) {
    out << "\n[sweep]\n";
    if (!c.sweep->axis.empty()) {
      out << "axis = " << c.sweep->axis << "\n";
      const Dimension dim = axis_dimension(c.sweep->axis);
      if (!c.sweep->values.empty()) {
        out << "values = ";
        for (std::size_t i = 0; i < c.sweep->values.size(); ++i)
          out << (i ? ", " : "") << q(c.sweep->values[i], dim);
        out << "\n";
      }
    }
    out << "metric = " << to_string(c.sweep->metric) << "\n"
        << "parallel = " << c.sweep->parallel << "\n";
  }

  out << "\n[output]\n"
      << "directory = " << c.output.directory << "\n"
      << "detector_csv = " << onoff(c.output.detector_csv) << "\n"
      << "snapshot_files = " << onoff(c.output.snapshot_files) << "\n"
      << "summary_json = " << onoff(c.output.summary_json) << "\n"
      << "plot_data = " << onoff(c.output.plot_data) << "\n"
      << "detector_stride = " << c.output.detector_stride << "\n";
  return out.str();
}

}  // namespace lightstore
