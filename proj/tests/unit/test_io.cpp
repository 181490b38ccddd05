#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include <json.hpp>

#include "lightstore/error.hpp"
#include "lightstore/io.hpp"
#include "lightstore/scenarios.hpp"

using namespace lightstore;
namespace fs = std::filesystem;

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

// Installs a comma-decimal global locale for the lifetime of the object.
struct GlobalLocale {
  std::locale saved;
  GlobalLocale() : saved(std::locale::global(std::locale(std::locale::classic(), new CommaDecimal))) {}
  ~GlobalLocale() { std::locale::global(saved); }
};

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lightstore_io_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DetectorSeries small_series() {
  DetectorSeries d;
  d.dt = 0.5;
  for (int i = 0; i < 7; ++i) {
    d.t.push_back(0.5 * i);
    d.field.push_back({0.25 * i, -0.125});
    d.input.push_back({1.0, 0.0});
    d.intensity.push_back(std::norm(d.field.back()));
    d.control.push_back(1234.5);
  }
  return d;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("numbers round-trip exactly") {
  for (double v : {0.0, -1.5, 1e-300, 6.02214076e23, 0.1, 1.0 / 3.0}) {
    const auto s = io::format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("detector csv layout and stride") {
  const auto d = small_series();
  const auto csv = io::detector_csv(d, 1);
  CHECK(csv.rfind("t_us,intensity,control_rabi\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  CHECK(csv.find("1.5,0.578125,1234.5\n") != std::string::npos);
  const auto strided = io::detector_csv(d, 3);
  CHECK(std::count(strided.begin(), strided.end(), '\n') == 4);
  CHECK_THROWS_AS(io::detector_csv(d, 0), ValidationError);
}

TEST_CASE("csv output ignores the global locale") {
  const auto d = small_series();
  const auto plain = io::detector_csv(d, 1);
  GlobalLocale comma;
  std::ostringstream probe;
  probe.imbue(std::locale());
  probe << 1234.5;
  REQUIRE(probe.str() == "1.234,5");
  CHECK(io::detector_csv(d, 1) == plain);
  CHECK(io::format_number(1234.5) == "1234.5");
}

TEST_CASE("snapshot csv columns") {
  FieldState s;
  s.dz = 0.5;
  s.control = 52.0;
  s.omega_s = {{1.0, 0.0}, {0.5, 0.5}};
  s.rho_ep = {{0.0, 1e-3}, {0.0, 0.0}};
  s.rho_mp = {{-0.02, 0.0}, {0.0, -0.01}};
  const auto csv = io::snapshot_csv(s, 8e8);
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "z_cm,omega_s_re,omega_s_im,rho_ep_re,rho_ep_im,rho_mp_re,rho_mp_im,psi_re,psi_im");
  CHECK(std::count(first.begin(), first.end(), ',') == 8);
  CHECK(first.rfind("0,1,0,0,0.001,-0.02,0,", 0) == 0);
}

TEST_CASE("spectrum and sweep csv") {
  const std::vector<SpectrumPoint> sp{{-1.0, -0.2, 0.5}, {0.0, 0.0, 0.9}};
  CHECK(io::spectrum_csv(sp) == "b_field_mG,delta_rad_per_us,transmission\n-1,-0.2,0.5\n0,0,0.9\n");
  SweepResult r;
  r.axis = "schedule.tau";
  r.rows = {{10.0, 0.4}, {20.0, 0.3}};
  CHECK(io::sweep_csv(r) == "schedule.tau,efficiency\n10,0.4\n20,0.3\n");
  const auto j = nlohmann::json::parse(io::sweep_json(r, "storage-50us"));
  CHECK(j["rows"].size() == 2);
  CHECK(j["coherence_time_us"].is_null());
}

TEST_CASE("atomic writes") {
  const auto dir = scratch_dir("atomic");
  const auto target = dir / "nested" / "out.csv";
  io::write_atomic(target, "first\n");
  CHECK(slurp(target) == "first\n");
  io::write_atomic(target, "second\n");
  CHECK(slurp(target) == "second\n");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(target.parent_path())) {
    ++files;
    CHECK(e.path().filename() == "out.csv");
  }
  CHECK(files == 1);
  fs::remove_all(dir);
}

TEST_CASE("summary json uses unit-suffixed keys") {
  Scenario s = builtin_scenario("storage-50us");
  s.grid.nz = 128;
  s.grid.dt = 0.05;
  const auto outcome = run_scenario(s);
  const auto j = nlohmann::json::parse(io::summary_json(s, outcome));
  for (const char* key : {"input_energy_rad2_per_us", "output_energy_rad2_per_us", "transmission_fraction",
                          "output_centroid_us", "delay_us", "compression_ratio", "retrieval_efficiency_fraction",
                          "peak_I_energy_rad2_per_us", "peak_II_energy_rad2_per_us"})
    CHECK(j["observables"].contains(key));
  CHECK(j["observables"]["retrieval_efficiency_fraction"].get<double>() ==
        *outcome.run->observables.retrieval_efficiency);
  CHECK(j["storage"]["tau_us"].get<double>() == doctest::Approx(50.0));
  CHECK(j["grid"]["nz"].get<int>() == 128);

  const auto a = nlohmann::json::parse(io::adiabaticity_json(outcome.adiabaticity));
  for (const char* key : {"bandwidth_rad_us", "window_rad_us", "ratio", "optical_depth", "pulse_length_cm",
                          "absorption_length_cm", "propagation_distance_cm", "adiabatic", "warning"})
    CHECK(a.contains(key));
}

}
