#include "weylband/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "weylband/errors.hpp"
#include "weylband/parallel.hpp"

namespace weylband {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(b, 1.0); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* dioph_name(RationalityKind k) {
  switch (k) {
    case RationalityKind::rational: return "rational";
    case RationalityKind::numerically_diophantine: return "numerically_diophantine";
    default: return "undecided";
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOFailure("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IOFailure("write failed: " + path.string());
}

std::string config_stamp(const ScenarioConfig& cfg, double h, double eps) {
  std::ostringstream s;
  s << "# surface=" << cfg.surface.family << " observable=" << cfg.observable.kind
    << " h=" << fmt_short(h) << " eps=" << fmt_short(eps)
    << " grid_n=" << cfg.numerics.grid_n << " seed=" << cfg.numerics.seed << "\n";
  return s.str();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult result;
  result.report.config = config;

  SurfaceProfile profile = make_profile(config.surface.family, config.surface.params);
  ObservableSpec obs = make_observable(config.observable.kind, config.observable.params);

  QInfinityConfig qcfg;
  qcfg.quad_tol = config.numerics.quad_tol;
  qcfg.ode_tol = config.numerics.ode_tol;

  // classical invariants table over the torus parameter
  {
    int n = std::max(3, config.numerics.classical_a_grid);
    double a_edge = profile.apex_radius * 0.999;
    result.classical_rows.resize(n);
    std::vector<double> as(n);
    for (int i = 0; i < n; ++i) as[i] = -a_edge + 2.0 * a_edge * i / (n - 1);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      result.classical_rows[i] = classical_invariants(profile, obs, as[i], qcfg);
    });
  }

  AdmissibleConfig acfg;
  acfg.grid_n = config.numerics.admissible_grid_n;
  acfg.transversality_tol = config.numerics.transversality_tol;
  acfg.quad_tol = config.numerics.quad_tol;
  acfg.qinf = qcfg;
  result.admissible = admissible_set(profile, obs, config.band.f3, config.band.f1, acfg);

  for (double h : config.numerics.h_list) {
    PerHArtifacts art;
    ReportRow row;
    row.h = h;
    row.eps = eps_for(config.band, h);
    art.band = BandSpec{config.band.e2, config.band.e4, config.band.f3, config.band.f1,
                        row.eps, h,
                        config.band.eps_is_exponent
                            ? std::optional<double>(config.band.eps_value)
                            : std::nullopt};
    art.band.validate();

    auto t0 = std::chrono::steady_clock::now();
    art.prediction = make_prediction(profile, result.admissible, art.band,
                                     config.numerics.quad_tol);
    row.n_pred = art.prediction.n_pred;
    row.n_strip_pred = art.prediction.n_strip_pred;
    row.runtime_volume_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    art.lattice = bohr_sommerfeld_spectrum(profile, obs, h, row.eps, config.band.e2,
                                           config.band.e4, config.numerics.a_margin,
                                           config.numerics.quad_tol);
    RectangleCount lat_count = count_lattice_detail(art.lattice, art.band);
    row.n_lattice = lat_count.inside;
    row.excluded_equatorial_count = art.lattice.excluded_equatorial;
    row.runtime_lattice_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    AssembleConfig scfg;
    scfg.grid_n = config.numerics.grid_n;
    scfg.m_buffer = config.numerics.m_buffer;
    art.spectrum = assemble_spectrum(profile, obs, h, row.eps, config.band.e2,
                                     config.band.e4, scfg);
    RectangleCount q_count = count_in_rectangle_detail(art.spectrum, art.band);
    row.n_quantum = q_count.inside;
    row.boundary_proximate_count = q_count.near_boundary + lat_count.near_boundary;
    for (const auto& en : art.spectrum.entries)
      if (en.z.real() > config.band.e2 && en.z.real() < config.band.e4)
        ++row.n_strip_quantum;
    if (row.eps > 0.0) {
      ImagResidualStats st =
          imag_correspondence(art.spectrum, profile, obs, config.numerics.quad_tol);
      row.median_imag_residual = st.median;
      row.p90_imag_residual = st.p90;
    }
    row.runtime_quantum_s = seconds_since(t0);

    row.rel_err_quantum_vs_pred = rel_err(static_cast<double>(row.n_quantum), row.n_pred);
    row.rel_err_lattice_vs_pred = rel_err(static_cast<double>(row.n_lattice), row.n_pred);
    row.rel_err_strip = rel_err(static_cast<double>(row.n_strip_quantum), row.n_strip_pred);

    result.report.rows.push_back(row);
    result.per_h.push_back(std::move(art));
  }

  if (result.report.rows.size() >= 3) result.report.trend = sweep_h(result.report);

  if (config.numerics.mc_samples > 0) {
    if (config.numerics.mc_samples < 100000)
      throw ConfigError("numerics.mc_samples must be at least 1e5 when enabled");
    auto [est, se] = montecarlo_volume_check(
        profile, result.admissible, config.band.e2, config.band.e4,
        config.numerics.mc_samples, static_cast<unsigned long long>(config.numerics.seed));
    MonteCarloCheck mc;
    mc.estimate = est;
    mc.stderr_est = se;
    mc.analytic = result.per_h.empty()
                      ? band_volume(profile, result.admissible, config.band.e2,
                                    config.band.e4, config.numerics.quad_tol)
                      : result.per_h.front().prediction.volume;
    mc.samples = config.numerics.mc_samples;
    result.report.montecarlo = mc;
  }

  return result;
}

TrendSummary sweep_h(const WeylReport& report) {
  if (report.rows.size() < 3)
    throw std::invalid_argument("sweep_h: at least 3 h values are required");
  TrendSummary tr;
  auto slope = [&](auto getter) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(report.rows.size());
    for (const auto& row : report.rows) {
      double x = std::log(row.h);
      double y = std::log(std::max(getter(row), 1e-12));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  tr.slope_band = slope([](const ReportRow& r) { return r.rel_err_quantum_vs_pred; });
  tr.slope_strip = slope([](const ReportRow& r) { return r.rel_err_strip; });
  tr.band_monotone_within_jitter = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    double jitter = 2.0 / std::max(report.rows[i].n_pred, 1.0);
    if (report.rows[i].rel_err_quantum_vs_pred >
        report.rows[i - 1].rel_err_quantum_vs_pred + jitter)
      tr.band_monotone_within_jitter = false;
  }
  return tr;
}

std::pair<double, double> montecarlo_volume_check(const SurfaceProfile& profile,
                                                  const AdmissibleSet& A, double e2,
                                                  double e4, long samples,
                                                  unsigned long long seed) {
  if (samples < 100000)
    throw std::invalid_argument("montecarlo_volume_check: samples >= 1e5 required");
  const double L = profile.length;
  const double s_max = std::sqrt(e4);
  const double t_max = std::sqrt(e4) * profile.apex_radius;
  const double box_vol = L * (2 * kPi) * (2 * s_max) * (2 * t_max);

  // splitmix-style generator: reproducible independently of the standard library
  auto next_u01 = [state = seed]() mutable {
    state += 0x9e3779b97f4a7c15ull;
    unsigned long long z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return (z >> 11) * 0x1.0p-53;
  };

  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    double s = L * next_u01();
    next_u01();  // theta: the symbol is rotation invariant, drawn for shape only
    double sigma = s_max * (2.0 * next_u01() - 1.0);
    double theta_star = t_max * (2.0 * next_u01() - 1.0);
    double f = profile.f(s);
    if (f <= 0.0) continue;
    double p = sigma * sigma + theta_star * theta_star / (f * f);
    if (p < e2 || p > e4 || p <= 0.0) continue;
    double a = theta_star / std::sqrt(p);
    if (A.contains(a)) ++hits;
  }
  double frac = static_cast<double>(hits) / static_cast<double>(samples);
  double estimate = box_vol * frac;
  double se = box_vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
  return {estimate, se};
}

// ---------------------------------------------------------------------------
// outputs

namespace {

std::string classical_csv(const ScenarioConfig& cfg,
                          const std::vector<ClassicalInvariants>& rows) {
  std::ostringstream out;
  out << config_stamp(cfg, cfg.numerics.h_list.front(),
                      eps_for(cfg.band, cfg.numerics.h_list.front()));
  out << "a,omega,iota,J1,q_avg,qinf_lo,qinf_hi,dioph_kind,dioph_p,dioph_q\n";
  for (const auto& r : rows) {
    out << fmt(r.a) << ',' << fmt(r.omega) << ',' << fmt(r.iota) << ',' << fmt(r.j1) << ','
        << fmt(r.q_avg) << ',' << fmt(r.q_inf.lo) << ',' << fmt(r.q_inf.hi) << ','
        << dioph_name(r.dioph.kind) << ',' << r.dioph.p << ',' << r.dioph.q << "\n";
  }
  return out.str();
}

std::string spectrum_csv(const ScenarioConfig& cfg, const PerHArtifacts& art) {
  std::ostringstream out;
  out << config_stamp(cfg, art.band.h, art.band.eps);
  out << "m,idx,re_z,im_z,im_over_eps,grid_n\n";
  for (const auto& en : art.spectrum.entries) {
    double im_over_eps = art.spectrum.eps > 0 ? en.z.imag() / art.spectrum.eps : 0.0;
    out << en.m << ',' << en.index << ',' << fmt(en.z.real()) << ',' << fmt(en.z.imag())
        << ',' << fmt(im_over_eps) << ',' << en.grid_n << "\n";
  }
  return out.str();
}

std::string lattice_csv(const ScenarioConfig& cfg, const PerHArtifacts& art) {
  std::ostringstream out;
  out << config_stamp(cfg, art.band.h, art.band.eps);
  out << "k,m,re_z,im_z_over_eps,a\n";
  for (const auto& pt : art.lattice.points) {
    double im_over_eps = art.lattice.eps > 0 ? pt.z.imag() / art.lattice.eps : 0.0;
    out << pt.k << ',' << pt.m << ',' << fmt(pt.z.real()) << ',' << fmt(im_over_eps) << ','
        << fmt(pt.a) << "\n";
  }
  return out.str();
}

json row_json(const ReportRow& r) {
  json j;
  j["h"] = r.h;
  j["eps"] = r.eps;
  j["n_quantum"] = r.n_quantum;
  j["n_lattice"] = r.n_lattice;
  j["n_pred"] = r.n_pred;
  j["n_strip_quantum"] = r.n_strip_quantum;
  j["n_strip_pred"] = r.n_strip_pred;
  j["rel_err_quantum_vs_pred"] = r.rel_err_quantum_vs_pred;
  j["rel_err_lattice_vs_pred"] = r.rel_err_lattice_vs_pred;
  j["rel_err_strip"] = r.rel_err_strip;
  j["boundary_proximate_count"] = r.boundary_proximate_count;
  j["excluded_equatorial_count"] = r.excluded_equatorial_count;
  j["median_imag_residual"] = r.median_imag_residual;
  j["p90_imag_residual"] = r.p90_imag_residual;
  return j;
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["surface"] = {{"family", c.surface.family}, {"params", c.surface.params}};
  j["observable"] = {{"kind", c.observable.kind}, {"params", c.observable.params}};
  j["band"] = {{"e2", c.band.e2},
               {"e4", c.band.e4},
               {"f3", c.band.f3},
               {"f1", c.band.f1},
               {"eps_is_exponent", c.band.eps_is_exponent},
               {"eps_value", c.band.eps_value}};
  j["numerics"] = {{"h_list", c.numerics.h_list},
                   {"grid_n", c.numerics.grid_n},
                   {"quad_tol", c.numerics.quad_tol},
                   {"ode_tol", c.numerics.ode_tol},
                   {"admissible_grid_n", c.numerics.admissible_grid_n},
                   {"transversality_tol", c.numerics.transversality_tol},
                   {"a_margin", c.numerics.a_margin},
                   {"m_buffer", c.numerics.m_buffer},
                   {"classical_a_grid", c.numerics.classical_a_grid},
                   {"seed", c.numerics.seed},
                   {"mc_samples", c.numerics.mc_samples}};
  j["output"] = {{"dir", c.output.dir}, {"svg", c.output.svg}};
  return j;
}

}  // namespace

std::string spectrum_svg(const Spectrum& spectrum, const BSLattice& lattice,
                         const BandSpec& band) {
  const double W = 1000, H = 700;
  const double ml = 80, mr = 30, mt = 40, mb = 60;

  double x_lo = band.e2, x_hi = band.e4, y_lo = band.f3, y_hi = band.f1;
  auto absorb = [&](double re, double im) {
    x_lo = std::min(x_lo, re);
    x_hi = std::max(x_hi, re);
    y_lo = std::min(y_lo, im);
    y_hi = std::max(y_hi, im);
  };
  for (const auto& en : spectrum.entries)
    absorb(en.z.real(), spectrum.eps > 0 ? en.z.imag() / spectrum.eps : 0.0);
  for (const auto& pt : lattice.points)
    absorb(pt.z.real(), lattice.eps > 0 ? pt.z.imag() / lattice.eps : 0.0);
  double xpad = 0.05 * (x_hi - x_lo + 1e-12), ypad = 0.08 * (y_hi - y_lo + 1e-12);
  x_lo -= xpad;
  x_hi += xpad;
  y_lo -= ypad;
  y_hi += ypad;

  auto X = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 700\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"700\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << "spectrum and quasi-eigenvalue lattice (h=" << fmt_short(band.h)
    << ", eps=" << fmt_short(band.eps) << ")</text>\n";
  // axes
  s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double xv = x_lo + (x_hi - x_lo) * t / 5;
    double yv = y_lo + (y_hi - y_lo) * t / 5;
    s << "<line x1=\"" << X(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << X(xv) << "\" y2=\""
      << H - mb + 6 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 22
      << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt_short(xv) << "</text>\n";
    s << "<line x1=\"" << ml - 6 << "\" y1=\"" << Y(yv) << "\" x2=\"" << ml << "\" y2=\""
      << Y(yv) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << ml - 10 << "\" y=\"" << Y(yv) + 4
      << "\" text-anchor=\"end\" font-size=\"12\">" << fmt_short(yv) << "</text>\n";
  }
  s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 16
    << "\" text-anchor=\"middle\" font-size=\"14\">Re z</text>\n";
  s << "<text x=\"20\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
    << (mt + H - mb) / 2 << ")\">Im z / eps</text>\n";
  // counting rectangle
  s << "<rect x=\"" << X(band.e2) << "\" y=\"" << Y(band.f1) << "\" width=\""
    << X(band.e4) - X(band.e2) << "\" height=\"" << Y(band.f3) - Y(band.f1)
    << "\" fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\" stroke-dasharray=\"8 5\"/>\n";
  // lattice crosses under quantum dots
  for (const auto& pt : lattice.points) {
    double x = X(pt.z.real());
    double y = Y(lattice.eps > 0 ? pt.z.imag() / lattice.eps : 0.0);
    s << "<path d=\"M" << x - 3 << ' ' << y << " H" << x + 3 << " M" << x << ' ' << y - 3
      << " V" << y + 3 << "\" stroke=\"#1f6fc4\" stroke-width=\"1.2\"/>\n";
  }
  for (const auto& en : spectrum.entries) {
    double x = X(en.z.real());
    double y = Y(spectrum.eps > 0 ? en.z.imag() / spectrum.eps : 0.0);
    s << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"2.2\" fill=\"black\"/>\n";
  }
  s << "<text x=\"" << W - mr - 10 << "\" y=\"" << mt + 14
    << "\" text-anchor=\"end\" font-size=\"12\" fill=\"black\">eigenvalues: dots, "
       "lattice: crosses</text>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_outputs(const ScenarioResult& result, const std::string& out_dir) {
  const ScenarioConfig& cfg = result.report.config;
  fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IOFailure("cannot create output directory: " + root.string());
  if (!fs::is_directory(root)) throw IOFailure("output path is not a directory: " + root.string());

  write_file(root / "effective_config.toml", to_toml(cfg));
  write_file(root / "classical.csv", classical_csv(cfg, result.classical_rows));

  json report;
  report["config_toml"] = to_toml(cfg);
  report["config"] = config_json(cfg);
  json admiss = json::array();
  for (const auto& iv : result.admissible.intervals)
    admiss.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
  json crossings = json::array();
  for (const auto& cr : result.admissible.crossings)
    crossings.push_back({{"a", cr.a}, {"slope", cr.slope}, {"level", cr.level_index}});
  report["admissible_set"] = {{"intervals", admiss},
                              {"crossings", crossings},
                              {"containment_checked", result.admissible.containment_checked}};
  report["rows"] = json::array();
  for (const auto& r : result.report.rows) report["rows"].push_back(row_json(r));
  if (result.report.trend) {
    report["trend"] = {{"slope_band", result.report.trend->slope_band},
                       {"slope_strip", result.report.trend->slope_strip},
                       {"band_monotone_within_jitter",
                        result.report.trend->band_monotone_within_jitter}};
  }
  if (result.report.montecarlo) {
    const auto& mc = *result.report.montecarlo;
    report["montecarlo"] = {{"estimate", mc.estimate},
                            {"stderr", mc.stderr_est},
                            {"analytic", mc.analytic},
                            {"samples", mc.samples}};
  }
  write_file(root / "report.json", report.dump(2) + "\n");

  json timings = json::array();
  for (const auto& r : result.report.rows) {
    timings.push_back({{"h", r.h},
                       {"runtime_volume_s", r.runtime_volume_s},
                       {"runtime_lattice_s", r.runtime_lattice_s},
                       {"runtime_quantum_s", r.runtime_quantum_s}});
  }
  write_file(root / "timings.json", timings.dump(2) + "\n");

  for (const auto& art : result.per_h) {
    fs::path hdir = root / ("h_" + std::string(fmt_short(art.band.h)));
    fs::create_directories(hdir, ec);
    if (ec) throw IOFailure("cannot create output directory: " + hdir.string());
    write_file(hdir / "spectrum.csv", spectrum_csv(cfg, art));
    write_file(hdir / "lattice.csv", lattice_csv(cfg, art));
    if (cfg.output.svg)
      write_file(hdir / "spectrum.svg", spectrum_svg(art.spectrum, art.lattice, art.band));
  }
}

DampedWaveReport run_damped_wave(const ScenarioConfig& config) {
  SurfaceProfile profile = make_profile(config.surface.family, config.surface.params);
  ObservableSpec damping = make_observable(config.observable.kind, config.observable.params);

  DampedWaveConfig dcfg;
  dcfg.grid_n = config.dampedwave.grid_n;
  dcfg.basis_margin = config.dampedwave.basis_margin;

  DampedWaveReport rep;
  rep.box = TauBox{config.dampedwave.tau_lo, config.dampedwave.tau_hi,
                   config.dampedwave.box_im_lo, config.dampedwave.box_im_hi};
  rep.modes = damped_wave_spectrum(profile, damping, config.dampedwave.tau_lo,
                                   config.dampedwave.tau_hi, dcfg);
  RectangleCount rc = count_eigenfrequencies_detail(rep.modes, rep.box);
  rep.n_quantum = rc.inside;
  rep.near_boundary = rc.near_boundary;

  // volume prediction at h = 1: frequencies live where the squared symbol
  // sits between the squared box edges and the damping average in the band
  AdmissibleConfig acfg;
  acfg.grid_n = config.numerics.admissible_grid_n;
  acfg.transversality_tol = config.numerics.transversality_tol;
  acfg.quad_tol = config.numerics.quad_tol;
  AdmissibleSet A =
      admissible_set(profile, damping, config.dampedwave.box_im_lo,
                     config.dampedwave.box_im_hi, acfg);
  double vol = band_volume(profile, A, rep.box.re_lo * rep.box.re_lo,
                           rep.box.re_hi * rep.box.re_hi, config.numerics.quad_tol);
  rep.n_pred = weyl_count_prediction(vol, 1.0);
  rep.rel_err = rel_err(static_cast<double>(rep.n_quantum), rep.n_pred);
  return rep;
}

void emit_damped_wave(const DampedWaveReport& report, const ScenarioConfig& config,
                      const std::string& out_dir) {
  fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IOFailure("cannot create output directory: " + root.string());

  std::ostringstream out;
  out << config_stamp(config, 1.0, 0.0);
  out << "m,idx,re_tau,im_tau\n";
  for (const auto& mode : report.modes) {
    int idx = 0;
    for (const auto& t : mode.taus)
      out << mode.m << ',' << idx++ << ',' << fmt(t.real()) << ',' << fmt(t.imag()) << "\n";
  }
  write_file(root / "dampedwave.csv", out.str());

  json j;
  j["config_toml"] = to_toml(config);
  j["box"] = {{"re_lo", report.box.re_lo},
              {"re_hi", report.box.re_hi},
              {"im_lo", report.box.im_lo},
              {"im_hi", report.box.im_hi}};
  j["n_quantum"] = report.n_quantum;
  j["n_pred"] = report.n_pred;
  j["rel_err"] = report.rel_err;
  j["near_boundary"] = report.near_boundary;
  write_file(root / "dampedwave_report.json", j.dump(2) + "\n");
}

}  // namespace weylband
