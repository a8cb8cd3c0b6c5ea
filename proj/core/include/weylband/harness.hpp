#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weylband/classical.hpp"
#include "weylband/config.hpp"
#include "weylband/quantum.hpp"
#include "weylband/weylvol.hpp"

namespace weylband {

struct ReportRow {
  double h = 0.0;
  double eps = 0.0;
  long n_quantum = 0;
  long n_lattice = 0;
  double n_pred = 0.0;
  long n_strip_quantum = 0;
  double n_strip_pred = 0.0;
  double rel_err_quantum_vs_pred = 0.0;
  double rel_err_lattice_vs_pred = 0.0;
  double rel_err_strip = 0.0;
  long boundary_proximate_count = 0;
  long excluded_equatorial_count = 0;
  double median_imag_residual = 0.0;
  double p90_imag_residual = 0.0;
  double runtime_volume_s = 0.0;
  double runtime_lattice_s = 0.0;
  double runtime_quantum_s = 0.0;
};

struct TrendSummary {
  double slope_band = 0.0;   // log-log slope of rel_err_quantum_vs_pred in h
  double slope_strip = 0.0;  // log-log slope of rel_err_strip in h
  bool band_monotone_within_jitter = false;
};

struct MonteCarloCheck {
  double estimate = 0.0;
  double stderr_est = 0.0;
  double analytic = 0.0;
  long samples = 0;
};

struct PerHArtifacts {
  BandSpec band;
  WeylPrediction prediction;
  BSLattice lattice;
  Spectrum spectrum;
};

struct WeylReport {
  ScenarioConfig config;
  std::vector<ReportRow> rows;
  std::optional<TrendSummary> trend;
  std::optional<MonteCarloCheck> montecarlo;
};

struct ScenarioResult {
  WeylReport report;
  AdmissibleSet admissible;
  std::vector<ClassicalInvariants> classical_rows;
  std::vector<PerHArtifacts> per_h;
};

// Executes the configured h-sweep end to end: classical table, admissible
// set, volume and strip predictions, quasi-eigenvalue lattice, quantum
// spectrum, counts and residual statistics. Deterministic given the config.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Fits the log-log error trends; requires at least 3 rows.
TrendSummary sweep_h(const WeylReport& report);

// Writes report.json, effective_config.toml, classical.csv and the per-h
// spectrum.csv / lattice.csv / spectrum.svg tree under the output directory.
// Runtimes go to timings.json, which is excluded from the determinism
// guarantee. Throws IOFailure on unwritable paths.
void emit_outputs(const ScenarioResult& result, const std::string& out_dir);

// Uniform rejection sampling of the banded Liouville volume in the bounding
// box of (s, theta, sigma, theta*). Returns (estimate, stderr).
std::pair<double, double> montecarlo_volume_check(const SurfaceProfile& profile,
                                                  const AdmissibleSet& A, double e2,
                                                  double e4, long samples,
                                                  unsigned long long seed);

// Scatter plot of (Re z, Im z / eps) with the counting rectangle dashed and
// lattice points drawn distinguishably from quantum eigenvalues.
std::string spectrum_svg(const Spectrum& spectrum, const BSLattice& lattice,
                         const BandSpec& band);

// damped-wave run driven by the [dampedwave] and [observable] sections
struct DampedWaveReport {
  TauBox box;
  long n_quantum = 0;
  double n_pred = 0.0;
  double rel_err = 0.0;
  long near_boundary = 0;
  std::vector<DampedWaveProblem> modes;
};

DampedWaveReport run_damped_wave(const ScenarioConfig& config);

void emit_damped_wave(const DampedWaveReport& report, const ScenarioConfig& config,
                      const std::string& out_dir);

}  // namespace weylband
