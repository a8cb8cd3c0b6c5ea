#include "weylband/weylvol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "weylband/errors.hpp"
#include "weylband/parallel.hpp"
#include "weylband/quadrature.hpp"

namespace weylband {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryProximity = 1e-8;

char axis_name(int level_index) { return level_index == 1 ? '1' : '3'; }

}  // namespace

void BandSpec::validate() const {
  if (!(e2 < e4)) throw std::invalid_argument("BandSpec: E2 < E4 required");
  if (!(f3 < f1)) throw std::invalid_argument("BandSpec: F3 < F1 required");
  if (!(h > 0.0)) throw std::invalid_argument("BandSpec: h > 0 required");
  if (!(eps >= 0.0)) throw std::invalid_argument("BandSpec: eps >= 0 required");
}

double AdmissibleSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals) m += iv.length();
  return m;
}

bool AdmissibleSet::contains(double a) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [a](const Interval& iv) { return iv.contains(a); });
}

namespace {

double refine_crossing(const std::function<double(double)>& g, double lo, double hi,
                       double level) {
  double glo = g(lo) - level;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-13) return mid;
    double gm = g(mid) - level;
    if ((glo < 0) == (gm < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// golden-section refinement of a bracketed interior extremum
double refine_extremum(const std::function<double(double)>& g, double lo, double hi,
                       bool maximum) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 80 && hi - lo > 1e-11; ++it) {
    bool keep_left = maximum ? (gc > gd) : (gc < gd);
    if (keep_left) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - gr * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + gr * (hi - lo);
      gd = g(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

AdmissibleSet admissible_set(const SurfaceProfile& profile, const ObservableSpec& obs,
                             double f3, double f1, const AdmissibleConfig& cfg) {
  if (!(f3 < f1)) throw std::invalid_argument("admissible_set: F3 < F1 required");
  if (cfg.grid_n < 16) throw std::invalid_argument("admissible_set: grid_n too small");
  const double fmax = profile.apex_radius;
  const double levels[2] = {f1, f3};
  const int level_idx[2] = {1, 3};

  // singular leaves first: the equator average must avoid both levels
  double q_equator = theta_average(obs, profile.apex_s);
  for (int j = 0; j < 2; ++j) {
    if (std::abs(levels[j] - q_equator) <= cfg.singular_leaf_tol) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "level F%c = %.9g coincides with the equatorial-leaf average %.9g",
                    axis_name(level_idx[j]), levels[j], q_equator);
      throw LevelHitsSingularLeaf(msg, levels[j]);
    }
  }

  // sample the torus average on the open edge (-fmax, fmax)
  const int n = cfg.grid_n;
  const double a_edge = fmax * (1.0 - 1e-7);
  std::vector<double> as(n), gs(n);
  for (int i = 0; i < n; ++i) as[i] = -a_edge + 2.0 * a_edge * i / (n - 1);
  auto g = [&](double a) { return torus_average(profile, obs, a, cfg.quad_tol); };
  parallel_for(n, [&](std::size_t i) { gs[i] = g(as[i]); });

  // tangency scan: interior extrema sitting on a level fail transversality;
  // the comparisons admit one flat side so symmetric sample pairs straddling
  // an extremum are still caught
  for (int i = 1; i + 1 < n; ++i) {
    double dl = gs[i] - gs[i - 1];
    double dr = gs[i + 1] - gs[i];
    if (dl == 0.0 && dr == 0.0) continue;
    bool is_max = dl >= 0.0 && dr <= 0.0;
    bool is_min = dl <= 0.0 && dr >= 0.0;
    if (!is_max && !is_min) continue;
    double local_var = std::abs(dl) + std::abs(dr);
    double near = 10.0 * local_var + cfg.tangency_tol;
    if (std::abs(gs[i] - f1) > near && std::abs(gs[i] - f3) > near) continue;
    double a_ext = refine_extremum(g, as[i - 1], as[i + 1], is_max);
    double g_ext = g(a_ext);
    for (int j = 0; j < 2; ++j) {
      if (std::abs(g_ext - levels[j]) <= cfg.tangency_tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "transversality violated: level F%c = %.9g is tangent to the torus "
                      "average at a = %.6g",
                      axis_name(level_idx[j]), levels[j], a_ext);
        throw TangentCrossing(msg, a_ext);
      }
    }
  }

  // transversal crossings of each level
  AdmissibleSet out;
  std::vector<double> cuts{-fmax, fmax};
  const double slope_step = 1e-4 * fmax;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      double v0 = gs[i] - levels[j], v1 = gs[i + 1] - levels[j];
      if (v0 == 0.0 || (v0 < 0) == (v1 < 0)) continue;
      double a_cross = refine_crossing(g, as[i], as[i + 1], levels[j]);
      double slope = (g(a_cross + slope_step) - g(a_cross - slope_step)) / (2 * slope_step);
      if (std::abs(slope) < cfg.transversality_tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "transversality violated: |d<q>/da| = %.3g at the F%c crossing a = %.6g",
                      std::abs(slope), axis_name(level_idx[j]), a_cross);
        throw TangentCrossing(msg, a_cross);
      }
      out.crossings.push_back({a_cross, slope, level_idx[j]});
      cuts.push_back(a_cross);
    }
  }

  // meridian family: its accumulation interval must avoid the levels unless
  // the meridian value lies strictly inside the band
  {
    QInfinityConfig qcfg = cfg.qinf;
    qcfg.quad_tol = cfg.quad_tol;
    Interval mer = q_infinity(profile, obs, 0.0, qcfg);
    for (int j = 0; j < 2; ++j) {
      if (mer.lo - cfg.singular_leaf_tol <= levels[j] &&
          levels[j] <= mer.hi + cfg.singular_leaf_tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "level F%c = %.9g lies in the meridian-family accumulation interval "
                      "[%.9g, %.9g]",
                      axis_name(level_idx[j]), levels[j], mer.lo, mer.hi);
        throw LevelHitsSingularLeaf(msg, levels[j]);
      }
    }
  }

  // assemble the admissible intervals between consecutive cuts
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    double lo = cuts[c], hi = cuts[c + 1];
    if (hi - lo < 1e-12) continue;
    double a_mid = 0.5 * (lo + hi);
    double g_mid = g(std::clamp(a_mid, -a_edge, a_edge));
    if (g_mid < f3 || g_mid > f1) continue;
    if (!out.intervals.empty() && std::abs(out.intervals.back().hi - lo) < 1e-12) {
      out.intervals.back().hi = hi;
    } else {
      out.intervals.push_back({lo, hi});
    }
  }

  // containment of the accumulation sets on interval interiors: immediate
  // for s-only observables, sampled on rational tori otherwise
  if (!obs.depends_on_theta) {
    out.containment_checked = true;
  } else {
    QInfinityConfig qcfg = cfg.qinf;
    qcfg.quad_tol = cfg.quad_tol;
    out.containment_checked = true;
    for (const auto& iv : out.intervals) {
      for (int k = 1; k <= 5; ++k) {
        double a = iv.lo + iv.length() * k / 6.0;
        if (std::abs(a) < 1e-9 || std::abs(a) > a_edge) continue;
        Interval qi = q_infinity(profile, obs, a, qcfg);
        if (qi.lo < f3 - cfg.singular_leaf_tol || qi.hi > f1 + cfg.singular_leaf_tol) {
          char msg[160];
          std::snprintf(msg, sizeof msg,
                        "accumulation interval [%.9g, %.9g] at a = %.6g escapes the band",
                        qi.lo, qi.hi, a);
          throw LevelHitsSingularLeaf(msg, qi.lo);
        }
      }
    }
  }
  return out;
}

namespace {

double interval_j1_integral(const SurfaceProfile& profile, const Interval& iv,
                            double quad_tol) {
  const double fmax = profile.apex_radius;
  auto j1_of_a = [&](double a) {
    double abs_a = std::abs(a);
    if (fmax - abs_a < 1e-13) abs_a = fmax - 1e-13;  // log endpoint, clamped
    return weight_J(profile, [](double) { return 1.0; }, std::copysign(abs_a, a),
                    quad_tol);
  };
  return integrate_de(j1_of_a, iv.lo, iv.hi, quad_tol).value;
}

}  // namespace

double band_volume(const SurfaceProfile& profile, const AdmissibleSet& A, double e2,
                   double e4, double quad_tol) {
  if (!(e2 <= e4)) throw std::invalid_argument("band_volume: E2 <= E4 required");
  double sum = 0.0;
  for (const auto& iv : A.intervals) sum += interval_j1_integral(profile, iv, quad_tol);
  return 2.0 * kPi * (e4 - e2) * sum;
}

double weyl_count_prediction(double volume, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("weyl_count_prediction: h > 0 required");
  double cell = 2.0 * kPi * h;
  return volume / (cell * cell);
}

double strip_prediction(const SurfaceProfile& profile, double e1, double e2, double h) {
  if (!(0.0 < e1 && e1 <= e2)) throw std::invalid_argument("strip_prediction: 0 < E1 <= E2");
  double vol = kPi * (e2 - e1) * area(profile, 1e-10);
  return weyl_count_prediction(vol, h);
}

WeylPrediction make_prediction(const SurfaceProfile& profile, const AdmissibleSet& A,
                               const BandSpec& band, double quad_tol) {
  WeylPrediction pred;
  pred.volume = band_volume(profile, A, band.e2, band.e4, quad_tol);
  pred.n_pred = weyl_count_prediction(pred.volume, band.h);
  pred.strip_volume = kPi * (band.e4 - band.e2) * area(profile, quad_tol);
  pred.n_strip_pred = weyl_count_prediction(pred.strip_volume, band.h);
  return pred;
}

BSLattice bohr_sommerfeld_spectrum(const SurfaceProfile& profile, const ObservableSpec& obs,
                                   double h, double eps, double e_lo, double e_hi,
                                   double a_margin, double quad_tol) {
  if (!(e_lo > 0.0 && e_lo < e_hi))
    throw std::invalid_argument("bohr_sommerfeld_spectrum: need 0 < E_lo < E_hi");
  BSLattice lat;
  lat.h = h;
  lat.eps = eps;
  const double fmax = profile.apex_radius;
  const double a_cut = (1.0 - a_margin) * fmax;
  const int m_max = static_cast<int>(std::floor(std::sqrt(e_hi) * a_cut / h));

  struct ModeOut {
    std::vector<BSPoint> points;
    long excluded = 0;
  };
  std::vector<ModeOut> per_mode(m_max + 1);

  auto action_at = [&](double am, double energy) {
    double a = am / std::sqrt(energy);
    return std::sqrt(energy) * action_iota(profile, a, quad_tol);
  };

  parallel_for(static_cast<std::size_t>(m_max + 1), [&](std::size_t mi) {
    int m = static_cast<int>(mi);
    ModeOut& out = per_mode[mi];
    double am = h * m;  // conserved angular action
    // below e_floor the torus with this angular action does not exist
    double e_floor = am > 0 ? (am / fmax) * (am / fmax) * (1.0 + 1e-10) : 0.0;
    double lo = std::max(e_lo, e_floor);
    if (lo >= e_hi) return;
    double j_lo = action_at(am, lo);
    double j_hi = action_at(am, e_hi);
    int k_min = std::max(0, static_cast<int>(std::ceil(j_lo / h - 0.5 - 1e-12)));
    int k_max = static_cast<int>(std::floor(j_hi / h - 0.5 + 1e-12));
    for (int k = k_min; k <= k_max; ++k) {
      double target = h * (k + 0.5);
      if (target < j_lo - 1e-14 || target > j_hi + 1e-14) continue;
      double elo = lo, ehi = e_hi;
      for (int it = 0; it < 80 && ehi - elo > 1e-14 * ehi; ++it) {
        double mid = 0.5 * (elo + ehi);
        if (action_at(am, mid) < target)
          elo = mid;
        else
          ehi = mid;
      }
      double energy = 0.5 * (elo + ehi);
      double a = am / std::sqrt(energy);
      if (std::abs(a) > a_cut) {
        ++out.excluded;
        continue;
      }
      double q_avg = torus_average(profile, obs, a, quad_tol);
      out.points.push_back({k, m, {energy, eps * q_avg}, a});
    }
  });

  // deterministic merge ordered by (m, k), negative m mirrored from positive
  for (int m = m_max; m >= 1; --m) {
    for (const auto& pt : per_mode[m].points)
      lat.points.push_back({pt.k, -m, pt.z, -pt.a});
    lat.excluded_equatorial += per_mode[m].excluded;
  }
  for (int m = 0; m <= m_max; ++m) {
    for (const auto& pt : per_mode[m].points) lat.points.push_back(pt);
    lat.excluded_equatorial += per_mode[m].excluded;
  }
  return lat;
}

namespace {

RectangleCount count_points(const std::vector<std::pair<double, double>>& pts,
                            const BandSpec& band) {
  RectangleCount rc;
  for (const auto& [re, im_over_eps] : pts) {
    bool inside = re > band.e2 && re < band.e4 && im_over_eps > band.f3 &&
                  im_over_eps < band.f1;
    if (inside) ++rc.inside;
    bool near_re = (std::abs(re - band.e2) <= kBoundaryProximity ||
                    std::abs(re - band.e4) <= kBoundaryProximity) &&
                   im_over_eps >= band.f3 - kBoundaryProximity &&
                   im_over_eps <= band.f1 + kBoundaryProximity;
    bool near_im = (std::abs(im_over_eps - band.f3) <= kBoundaryProximity ||
                    std::abs(im_over_eps - band.f1) <= kBoundaryProximity) &&
                   re >= band.e2 - kBoundaryProximity && re <= band.e4 + kBoundaryProximity;
    if (near_re || near_im) ++rc.near_boundary;
  }
  return rc;
}

}  // namespace

RectangleCount count_lattice_detail(const BSLattice& lattice, const BandSpec& band) {
  band.validate();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(lattice.points.size());
  for (const auto& p : lattice.points) {
    double im_over_eps = lattice.eps > 0 ? p.z.imag() / lattice.eps : 0.0;
    pts.emplace_back(p.z.real(), im_over_eps);
  }
  return count_points(pts, band);
}

long count_lattice(const BSLattice& lattice, const BandSpec& band) {
  return count_lattice_detail(lattice, band).inside;
}

double band_volume_isoenergetic(const SurfaceProfile& profile, const ObservableSpec& obs,
                                double f3, double f1, double e2, double e4,
                                int subintervals, const AdmissibleConfig& cfg) {
  if (subintervals < 1)
    throw std::invalid_argument("band_volume_isoenergetic: need >= 1 subinterval");
  // position-space observables have energy-independent torus averages, so
  // each subinterval re-derives the same admissible set; the partition is
  // kept to mirror the energy-resolved counting statement
  double total = 0.0;
  for (int j = 0; j < subintervals; ++j) {
    double lo = e2 + (e4 - e2) * j / subintervals;
    double hi = e2 + (e4 - e2) * (j + 1) / subintervals;
    AdmissibleSet A = admissible_set(profile, obs, f3, f1, cfg);
    total += band_volume(profile, A, lo, hi, cfg.quad_tol);
  }
  return total;
}

}  // namespace weylband
