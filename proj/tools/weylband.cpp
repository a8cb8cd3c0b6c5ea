// weylband: counts eigenvalues of weakly non-selfadjoint Laplacians on
// surfaces of revolution in spectral rectangles and compares three routes:
// the discretized operator, the quasi-eigenvalue lattice, and the
// phase-space volume of the flow-invariant region selected by the band.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "weylband/config.hpp"
#include "weylband/errors.hpp"
#include "weylband/harness.hpp"

namespace {

using namespace weylband;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::vector<double> h_list;
  double eps_exponent = -1.0;
  int grid_n = 0;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "TOML config file");
  cmd->add_option("--out-dir", flags.out_dir, "output directory (overrides [output] dir)");
  cmd->add_option("--h-list", flags.h_list,
                  "semiclassical parameters, strictly decreasing (overrides numerics)")
      ->delimiter(',');
  cmd->add_option("--eps-exponent", flags.eps_exponent,
                  "set eps = h^alpha (overrides [band] eps)");
  cmd->add_option("--grid-n", flags.grid_n, "mode grid size (overrides numerics)");
  cmd->add_flag("-v,--verbose", flags.verbosity, "chatty progress on stderr");
}

ScenarioConfig effective_config(const CommonFlags& flags) {
  ScenarioConfig cfg;
  if (!flags.config_path.empty()) cfg = parse_config_file(flags.config_path);
  if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;
  if (!flags.h_list.empty()) {
    cfg.numerics.h_list = flags.h_list;
    for (std::size_t i = 1; i < cfg.numerics.h_list.size(); ++i)
      if (!(cfg.numerics.h_list[i] < cfg.numerics.h_list[i - 1]))
        throw ConfigError("--h-list must be strictly decreasing");
  }
  if (flags.eps_exponent >= 0.0) {
    cfg.band.eps_is_exponent = true;
    cfg.band.eps_value = flags.eps_exponent;
  }
  if (flags.grid_n > 0) cfg.numerics.grid_n = flags.grid_n;
  return cfg;
}

void print_rows(const WeylReport& report) {
  std::printf("  %-8s %-10s %10s %10s %10s %12s %12s\n", "h", "eps", "n_quantum",
              "n_lattice", "n_pred", "rel_quantum", "rel_lattice");
  for (const auto& r : report.rows) {
    std::printf("  %-8g %-10.5g %10ld %10ld %10.2f %12.4f %12.4f\n", r.h, r.eps,
                r.n_quantum, r.n_lattice, r.n_pred, r.rel_err_quantum_vs_pred,
                r.rel_err_lattice_vs_pred);
  }
}

int run_verify(const CommonFlags& flags, bool require_sweep) {
  ScenarioConfig cfg = effective_config(flags);
  if (require_sweep && cfg.numerics.h_list.size() < 3)
    throw ConfigError("sweep needs at least 3 h values");
  ScenarioResult result = run_scenario(cfg);
  emit_outputs(result, cfg.output.dir);
  print_rows(result.report);
  if (result.report.trend) {
    std::printf("  trend: band slope %.3f, strip slope %.3f, monotone within jitter: %s\n",
                result.report.trend->slope_band, result.report.trend->slope_strip,
                result.report.trend->band_monotone_within_jitter ? "yes" : "no");
  }
  if (result.report.montecarlo) {
    const auto& mc = *result.report.montecarlo;
    std::printf("  montecarlo volume: %.6g +- %.2g (analytic %.6g)\n", mc.estimate,
                mc.stderr_est, mc.analytic);
  }
  std::printf("report written to %s/report.json\n", cfg.output.dir.c_str());
  return 0;
}

int run_classical(const CommonFlags& flags) {
  ScenarioConfig cfg = effective_config(flags);
  cfg.numerics.h_list = {cfg.numerics.h_list.front()};
  ScenarioConfig reduced = cfg;
  // classical table only: skip the quantum pipeline by trimming the run
  SurfaceProfile profile = make_profile(cfg.surface.family, cfg.surface.params);
  ObservableSpec obs = make_observable(cfg.observable.kind, cfg.observable.params);
  QInfinityConfig qcfg;
  qcfg.quad_tol = cfg.numerics.quad_tol;
  qcfg.ode_tol = cfg.numerics.ode_tol;
  int n = std::max(3, cfg.numerics.classical_a_grid);
  double a_edge = profile.apex_radius * 0.999;
  ScenarioResult partial;
  partial.report.config = reduced;
  partial.classical_rows.resize(n);
  for (int i = 0; i < n; ++i) {
    double a = -a_edge + 2.0 * a_edge * i / (n - 1);
    partial.classical_rows[i] = classical_invariants(profile, obs, a, qcfg);
  }
  emit_outputs(partial, cfg.output.dir);
  std::printf("classical table written to %s/classical.csv (%d tori)\n",
              cfg.output.dir.c_str(), n);
  return 0;
}

int run_volume(const CommonFlags& flags) {
  ScenarioConfig cfg = effective_config(flags);
  SurfaceProfile profile = make_profile(cfg.surface.family, cfg.surface.params);
  ObservableSpec obs = make_observable(cfg.observable.kind, cfg.observable.params);
  AdmissibleConfig acfg;
  acfg.grid_n = cfg.numerics.admissible_grid_n;
  acfg.transversality_tol = cfg.numerics.transversality_tol;
  acfg.quad_tol = cfg.numerics.quad_tol;
  AdmissibleSet A = admissible_set(profile, obs, cfg.band.f3, cfg.band.f1, acfg);
  double h = cfg.numerics.h_list.front();
  BandSpec band{cfg.band.e2, cfg.band.e4, cfg.band.f3, cfg.band.f1, eps_for(cfg.band, h), h,
                cfg.band.eps_is_exponent ? std::optional<double>(cfg.band.eps_value)
                                         : std::nullopt};
  WeylPrediction pred = make_prediction(profile, A, band, cfg.numerics.quad_tol);
  std::printf("admissible intervals:");
  for (const auto& iv : A.intervals) std::printf(" [%.6g, %.6g]", iv.lo, iv.hi);
  std::printf("\nvolume %.8g, n_pred %.3f (strip %.8g, n_strip %.3f) at h = %g\n",
              pred.volume, pred.n_pred, pred.strip_volume, pred.n_strip_pred, h);
  if (cfg.numerics.mc_samples > 0) {
    auto [est, se] = montecarlo_volume_check(profile, A, cfg.band.e2, cfg.band.e4,
                                             cfg.numerics.mc_samples,
                                             static_cast<unsigned long long>(cfg.numerics.seed));
    std::printf("montecarlo: %.8g +- %.3g\n", est, se);
  }
  return 0;
}

int run_spectrum_or_count(const CommonFlags& flags, bool with_count) {
  ScenarioConfig cfg = effective_config(flags);
  cfg.numerics.h_list = {cfg.numerics.h_list.front()};
  ScenarioResult result = run_scenario(cfg);
  emit_outputs(result, cfg.output.dir);
  if (with_count) print_rows(result.report);
  const auto& row = result.report.rows.front();
  std::printf("%zu eigenvalues assembled at h = %g (%ld in the rectangle)\n",
              result.per_h.front().spectrum.entries.size(), row.h, row.n_quantum);
  return 0;
}

int run_dampedwave(const CommonFlags& flags) {
  ScenarioConfig cfg = effective_config(flags);
  DampedWaveReport rep = run_damped_wave(cfg);
  emit_damped_wave(rep, cfg, cfg.output.dir);
  std::printf("eigenfrequencies in box [%g, %g] x i[%g, %g]: %ld (prediction %.2f, "
              "rel err %.4f)\n",
              rep.box.re_lo, rep.box.re_hi, rep.box.im_lo, rep.box.im_hi, rep.n_quantum,
              rep.n_pred, rep.rel_err);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylband: eigenvalue counting in spectral bands on surfaces of revolution"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* c_classical = app.add_subcommand("classical", "per-torus invariants to classical.csv");
  auto* c_volume = app.add_subcommand("volume", "admissible set and volume predictions");
  auto* c_spectrum = app.add_subcommand("spectrum", "discretized spectrum at the first h");
  auto* c_count = app.add_subcommand("count", "three-way counts at the first h");
  auto* c_verify = app.add_subcommand("verify", "full h-sweep with report and plots");
  auto* c_damped = app.add_subcommand("dampedwave", "damped-wave eigenfrequency counts");
  auto* c_sweep = app.add_subcommand("sweep", "h-sweep trend (needs >= 3 h values)");
  for (auto* cmd : {c_classical, c_volume, c_spectrum, c_count, c_verify, c_damped, c_sweep})
    add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(c_classical)) return run_classical(flags);
    if (app.got_subcommand(c_volume)) return run_volume(flags);
    if (app.got_subcommand(c_spectrum)) return run_spectrum_or_count(flags, false);
    if (app.got_subcommand(c_count)) return run_spectrum_or_count(flags, true);
    if (app.got_subcommand(c_verify)) return run_verify(flags, false);
    if (app.got_subcommand(c_sweep)) return run_verify(flags, true);
    if (app.got_subcommand(c_damped)) return run_dampedwave(flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected failure: %s\n", e.what());
    return 1;
  }
  return 2;
}
