#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "lightstore/config.hpp"
#include "lightstore/io.hpp"
#include "lightstore/scenarios.hpp"
#include "lightstore/units.hpp"

namespace lightstore::cli {

namespace {

namespace fs = std::filesystem;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("lightstore", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::info);
  if (const char* env = std::getenv("POLARITON_LOG"); env && *env) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off")
      log->warn("POLARITON_LOG='{}' not recognised; using info", env);
    else
      log->set_level(level);
  }
  return log;
}

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string scenario;
  std::string sweep_axis;
  std::string sweep_values;
  std::string metric;
  unsigned parallel = 0;
  std::string snapshots;
  bool print = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{ConfigIssue::Kind::Syntax, 0, 0, "", "cannot read config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

RunConfig resolve_config(const Options& o, std::string_view default_scenario) {
  if (!o.config_path.empty() && !o.scenario.empty())
    throw ConfigError({{ConfigIssue::Kind::Schema, 0, 0, "run.scenario",
                        "give either --config or --scenario, not both"}});
  RunConfig config = !o.config_path.empty() ? parse_config(read_file(o.config_path))
                                            : config_for_scenario(o.scenario.empty() ? default_scenario : o.scenario);
  if (!o.out_dir.empty()) config.output.directory = o.out_dir;
  if (!o.snapshots.empty()) {
    config.scenario.snapshot_times.clear();
    for (const auto& t : split_list(o.snapshots))
      config.scenario.snapshot_times.push_back(parse_quantity(t, Dimension::Time, true));
  }
  return config;
}

fs::path output_path(const RunConfig& c, const std::string& name) { return fs::path(c.output.directory) / name; }

void emit(const fs::path& path, std::string_view content, spdlog::logger& log) {
  io::write_atomic(path, content);
  log.info("wrote {}", path.string());
}

void log_warnings(const std::vector<std::string>& warnings, spdlog::logger& log) {
  for (const auto& w : warnings) log.warn("{}", w);
}

int run_spectrum(const Options& o, std::ostream& out, spdlog::logger& log) {
  RunConfig c = resolve_config(o, "spectrum-fig1b");
  c.scenario.kind = Scenario::Kind::Spectrum;
  log.debug("running {}", c.scenario.name);
  const auto outcome = run_scenario(c.scenario);
  out << "control_rabi_rad_per_us " << io::format_number(outcome.initial_control) << "\n"
      << "fwhm_khz " << io::format_number(units::rate_to_khz(outcome.spectrum_fwhm)) << "\n";
  emit(output_path(c, "spectrum.csv"), io::spectrum_csv(outcome.spectrum), log);
  emit(output_path(c, "adiabaticity.json"), io::adiabaticity_json(outcome.adiabaticity), log);
  if (c.output.summary_json) emit(output_path(c, "summary.json"), io::summary_json(c.scenario, outcome), log);
  if (c.output.plot_data) emit(output_path(c, "spectrum.dat"), io::spectrum_plot_data(outcome.spectrum), log);
  emit(output_path(c, "effective.cfg"), emit_config(c), log);
  return kOk;
}

int run_store(const Options& o, std::ostream& out, spdlog::logger& log) {
  RunConfig c = resolve_config(o, "storage-50us");
  if (c.scenario.kind == Scenario::Kind::Spectrum)
    throw ConfigError({{ConfigIssue::Kind::Schema, 0, 0, "run.kind",
                        "scenario '" + c.scenario.name + "' is a spectrum; use the spectrum subcommand"}});
  log.debug("running {} (t_max {} us)", c.scenario.name, c.scenario.resolved_t_max());
  const auto outcome = run_scenario(c.scenario);
  log_warnings(outcome.warnings, log);
  const auto& run = *outcome.run;
  const auto& ob = run.observables;
  out << "transmission " << io::format_number(ob.transmission) << "\n";
  if (ob.delay) out << "delay_us " << io::format_number(*ob.delay) << "\n";
  if (ob.retrieval_efficiency) out << "retrieval_efficiency " << io::format_number(*ob.retrieval_efficiency) << "\n";
  if (ob.compression_ratio) out << "compression_ratio " << io::format_number(*ob.compression_ratio) << "\n";

  if (c.output.detector_csv)
    emit(output_path(c, "detector.csv"), io::detector_csv(run.detector, c.output.detector_stride), log);
  if (c.output.summary_json) emit(output_path(c, "summary.json"), io::summary_json(c.scenario, outcome), log);
  emit(output_path(c, "adiabaticity.json"), io::adiabaticity_json(outcome.adiabaticity), log);
  if (c.output.snapshot_files)
    for (const auto& s : run.snapshots)
      emit(output_path(c, "snapshot_" + io::format_number(s.time) + "us.csv"), io::snapshot_csv(s, outcome.kappa), log);
  if (c.output.plot_data)
    emit(output_path(c, "detector.dat"), io::detector_plot_data(run.detector, c.output.detector_stride), log);
  emit(output_path(c, "effective.cfg"), emit_config(c), log);
  return kOk;
}

int run_sweep_command(const Options& o, std::ostream& out, spdlog::logger& log) {
  RunConfig c = resolve_config(o, "storage-50us");
  SweepConfig sweep = c.sweep.value_or(SweepConfig{});
  if (!o.sweep_axis.empty()) {
    axis_dimension(o.sweep_axis);
    if (o.sweep_axis != sweep.axis) sweep.values.clear();
    sweep.axis = o.sweep_axis;
  }
  if (!o.sweep_values.empty()) {
    if (sweep.axis.empty())
      throw ConfigError({{ConfigIssue::Kind::Schema, 0, 0, "sweep.axis", "--sweep-values needs --sweep-axis"}});
    sweep.values.clear();
    for (const auto& v : split_list(o.sweep_values))
      sweep.values.push_back(parse_quantity(v, axis_dimension(sweep.axis), true));
  }
  if (!o.metric.empty()) sweep.metric = parse_metric(o.metric);
  if (o.parallel > 0) sweep.parallel = o.parallel;
  if (sweep.axis.empty() || sweep.values.empty())
    throw ConfigError({{ConfigIssue::Kind::Schema, 0, 0, "sweep", "a sweep needs an axis and values"}});
  c.sweep = sweep;

  SweepSpec spec{c.scenario.name, sweep.axis, sweep.values, sweep.metric, sweep.parallel};
  log.info("sweeping {} over {} values ({} threads)", spec.axis, spec.values.size(), spec.parallel);
  const auto result = run_sweep(c.scenario, spec);
  for (const auto& r : result.rows)
    out << io::format_number(r.value) << " " << io::format_number(r.metric) << "\n";
  if (result.coherence_time) out << "coherence_time_us " << io::format_number(*result.coherence_time) << "\n";
  if (result.fit) out << "fit_r_squared " << io::format_number(result.fit->r_squared) << "\n";
  emit(output_path(c, "sweep.csv"), io::sweep_csv(result), log);
  emit(output_path(c, "sweep.json"), io::sweep_json(result, c.scenario.name), log);
  emit(output_path(c, "effective.cfg"), emit_config(c), log);
  return kOk;
}

int run_validate(const Options& o, std::ostream& out) {
  if (o.config_path.empty() && o.scenario.empty())
    throw ConfigError({{ConfigIssue::Kind::Schema, 0, 0, "", "validate needs a config file"}});
  RunConfig c = resolve_config(o, "");
  if (c.scenario.kind == Scenario::Kind::Propagation) (void)c.scenario.schedule();
  if (o.print) out << emit_config(c);
  return kOk;
}

int run_list(std::ostream& out) {
  for (const auto& name : scenario_names()) out << name << "  " << builtin_scenario(name).description << "\n";
  return kOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Light storage in an EIT vapor cell: spectra, slow light, storage and retrieval"};
  app.name(args.empty() ? "lightstore" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "configuration file");
    sub->add_option("-o,--out", o.out_dir, "output directory");
    sub->add_option("--scenario", o.scenario, "builtin scenario name");
  };

  auto* spectrum = app.add_subcommand("spectrum", "steady-state transmission spectrum");
  add_common(spectrum);

  auto* store = app.add_subcommand("store", "propagate a pulse through the cell (slow light or storage)");
  add_common(store);
  store->add_option("--snapshots", o.snapshots, "comma-separated snapshot times (us)");

  auto* sweep = app.add_subcommand("sweep", "run a scenario over a list of parameter values");
  add_common(sweep);
  sweep->add_option("--sweep-axis", o.sweep_axis, "parameter path, e.g. schedule.tau");
  sweep->add_option("--sweep-values", o.sweep_values, "comma-separated values (internal units unless suffixed)");
  sweep->add_option("--metric", o.metric, "efficiency | delay | width");
  sweep->add_option("--parallel", o.parallel, "worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a configuration file; writes nothing");
  validate->add_option("config,-c,--config", o.config_path, "configuration file");
  validate->add_option("--scenario", o.scenario, "builtin scenario name");
  validate->add_flag("--print", o.print, "print the effective configuration");

  auto* list = app.add_subcommand("list-scenarios", "list builtin scenarios");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("lightstore");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(o, out, *log);
    if (store->parsed()) return run_store(o, out, *log);
    if (sweep->parsed()) return run_sweep_command(o, out, *log);
    if (validate->parsed()) return run_validate(o, out);
    if (list->parsed()) return run_list(out);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) err << "error: " << format_issue(issue) << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  err << app.help();
  return kConfigError;
}

}  // namespace lightstore::cli
