#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weylband/errors.hpp"
#include "weylband/harness.hpp"

using namespace weylband;
namespace fs = std::filesystem;

namespace {

ScenarioConfig tiny_config() {
  // coarse but structurally complete: one h, small grids
  ScenarioConfig cfg = parse_config_text(R"(
[band]
e2 = 0.9
e4 = 1.1
eps = "h^0.5"
[numerics]
h_list = [0.22]
grid_n = 128
admissible_grid_n = 64
classical_a_grid = 9
quad_tol = 1e-9
ode_tol = 1e-9
)");
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("tiny scenario runs and the outputs are consistent") {
  ScenarioConfig cfg = tiny_config();
  ScenarioResult result = run_scenario(cfg);
  REQUIRE(result.report.rows.size() == 1);
  const ReportRow& row = result.report.rows.front();
  CHECK(row.h == 0.22);
  CHECK(row.eps == doctest::Approx(std::sqrt(0.22)));
  CHECK(row.n_pred > 0.0);
  CHECK(row.n_strip_quantum > 0);

  fs::path dir = fs::temp_directory_path() / "weylband_harness_test";
  fs::remove_all(dir);
  emit_outputs(result, dir.string());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "classical.csv"));
  CHECK(fs::exists(dir / "effective_config.toml"));
  CHECK(fs::exists(dir / "timings.json"));
  fs::path hdir = dir / "h_0.22";
  REQUIRE(fs::exists(hdir / "spectrum.csv"));
  REQUIRE(fs::exists(hdir / "lattice.csv"));
  CHECK(fs::exists(hdir / "spectrum.svg"));

  // report consistency: n_quantum equals the csv rows inside the rectangle
  std::istringstream csv(slurp(hdir / "spectrum.csv"));
  std::string line;
  long inside = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'm') continue;
    double re, im_over_eps;
    int m, idx, grid_n;
    std::sscanf(line.c_str(), "%d,%d,%lf,%*lf,%lf,%d", &m, &idx, &re, &im_over_eps, &grid_n);
    if (re > cfg.band.e2 && re < cfg.band.e4 && im_over_eps > cfg.band.f3 &&
        im_over_eps < cfg.band.f1)
      ++inside;
  }
  CHECK(inside == row.n_quantum);

  // the echoed effective config re-parses to the same invocation
  ScenarioConfig echoed = parse_config_file((dir / "effective_config.toml").string());
  CHECK(echoed == cfg);
}

TEST_CASE("determinism: identical config gives bit-identical outputs") {
  ScenarioConfig cfg = tiny_config();
  fs::path d1 = fs::temp_directory_path() / "weylband_det_1";
  fs::path d2 = fs::temp_directory_path() / "weylband_det_2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  emit_outputs(run_scenario(cfg), d1.string());
  emit_outputs(run_scenario(cfg), d2.string());
  for (const char* rel : {"report.json", "classical.csv", "effective_config.toml",
                          "h_0.22/spectrum.csv", "h_0.22/lattice.csv", "h_0.22/spectrum.svg"}) {
    CHECK(slurp(d1 / rel) == slurp(d2 / rel));
  }
}

TEST_CASE("montecarlo volume check agrees with the reduction") {
  SurfaceProfile sphere = make_profile("sphere", {});
  ObservableSpec cos2 = make_observable("cos2s", {});
  AdmissibleSet A = admissible_set(sphere, cos2, 0.2, 0.4, {});
  double analytic = band_volume(sphere, A, 0.9, 1.1, 1e-10);
  auto [est, se] = montecarlo_volume_check(sphere, A, 0.9, 1.1, 200000, 20240101);
  CHECK(std::abs(est - analytic) <= 3.0 * se);
  // full admissible set reproduces the strip volume
  AdmissibleSet full;
  full.intervals = {{-1.0, 1.0}};
  double strip = band_volume(sphere, full, 0.9, 1.1, 1e-10);
  auto [est2, se2] = montecarlo_volume_check(sphere, full, 0.9, 1.1, 200000, 12345);
  CHECK(std::abs(est2 - strip) <= 3.0 * se2);
  CHECK_THROWS_AS(montecarlo_volume_check(sphere, A, 0.9, 1.1, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("svg is produced even for empty inputs") {
  Spectrum empty;
  empty.h = 0.1;
  empty.eps = 0.1;
  BSLattice lat;
  lat.h = 0.1;
  lat.eps = 0.1;
  BandSpec band{0.9, 1.1, 0.2, 0.4, 0.1, 0.1, {}};
  std::string svg = spectrum_svg(empty, lat, band);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("unwritable output path raises IOFailure") {
  ScenarioConfig cfg = tiny_config();
  ScenarioResult result = run_scenario(cfg);
  fs::path file = fs::temp_directory_path() / "weylband_blocker";
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(emit_outputs(result, file.string()), IOFailure);
}

TEST_CASE("sweep needs three rows") {
  WeylReport rep;
  rep.rows.resize(2);
  CHECK_THROWS_AS(sweep_h(rep), std::invalid_argument);
}
