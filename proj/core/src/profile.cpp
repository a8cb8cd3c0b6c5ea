#include "weylband/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weylband/errors.hpp"
#include "weylband/quadrature.hpp"

namespace weylband {

namespace {

constexpr double kPi = std::numbers::pi;

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

double SurfaceProfile::height_d(double s) const {
  double fp = radius_d(s);
  return std::sqrt(std::max(0.0, 1.0 - fp * fp));
}

SurfaceProfile make_profile(const std::string& family_tag,
                            const std::map<std::string, double>& params) {
  SurfaceProfile p;
  p.family = family_tag;
  p.params = params;
  if (family_tag == "sphere") {
    p.length = kPi;
    p.radius = [](double s) { return std::sin(s); };
    p.radius_d = [](double s) { return std::cos(s); };
    p.radius_dd = [](double s) { return -std::sin(s); };
    p.apex_s = kPi / 2;
    p.apex_radius = 1.0;
    return p;
  }
  if (family_tag == "perturbed_sphere") {
    double c = get_param(params, "c", 0.0);
    // c <= -1/3 loses the single nondegenerate maximum; c > 1/6 makes
    // radius'^2 exceed 1 so s is no longer arclength.
    if (!(c > -1.0 / 3.0) || !(c <= 1.0 / 6.0)) {
      throw ParamOutOfRange("perturbed_sphere: c must lie in (-1/3, 1/6], got c = " +
                            std::to_string(c));
    }
    p.length = kPi;
    p.radius = [c](double s) {
      double u = std::sin(s);
      return u * (1.0 + c * u * u);
    };
    p.radius_d = [c](double s) {
      double u = std::sin(s);
      return std::cos(s) * (1.0 + 3.0 * c * u * u);
    };
    p.radius_dd = [c](double s) {
      double u = std::sin(s), v = std::cos(s);
      return -u * (1.0 + 3.0 * c * u * u) + 6.0 * c * u * v * v;
    };
    p.apex_s = kPi / 2;
    p.apex_radius = 1.0 + c;
    return p;
  }
  throw UnknownFamily("unknown profile family: " + family_tag);
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ProfileCheck& c) { return c.passed; });
}

ValidationReport validate_profile(const SurfaceProfile& profile, int grid_n) {
  if (grid_n < 64) throw std::invalid_argument("validate_profile: grid_n must be >= 64");
  ValidationReport rep;
  const double L = profile.length;
  const double tol = 1e-9 * std::max(1.0, profile.apex_radius);

  auto add = [&rep](const std::string& name, bool ok, const std::string& detail) {
    rep.checks.push_back({name, ok, detail});
  };

  char buf[128];

  double f0 = profile.f(0.0), fL = profile.f(L);
  std::snprintf(buf, sizeof buf, "f(0)=%.3e f(L)=%.3e", f0, fL);
  add("pole_zero_radius", std::abs(f0) <= tol && std::abs(fL) <= tol, buf);

  double fp0 = profile.df(0.0), fpL = profile.df(L);
  std::snprintf(buf, sizeof buf, "f'(0)=%.12g f'(L)=%.12g", fp0, fpL);
  add("pole_regularity", std::abs(fp0 - 1.0) <= tol && std::abs(fpL + 1.0) <= tol, buf);

  bool positive = true;
  bool slope_bound = true;
  int sign_changes = 0;
  double prev_fp = fp0;
  double crit_s = -1.0;
  for (int i = 1; i < grid_n; ++i) {
    double s = L * i / grid_n;
    double f = profile.f(s);
    double fp = profile.df(s);
    if (f <= 0.0) positive = false;
    if (fp * fp > 1.0 + 1e-12) slope_bound = false;
    if (prev_fp > 0.0 && fp <= 0.0) {
      ++sign_changes;
      crit_s = s;
    } else if (prev_fp < 0.0 && fp >= 0.0) {
      ++sign_changes;
    }
    prev_fp = fp;
  }
  add("positive_inside", positive, positive ? "f > 0 on the grid" : "f <= 0 at a grid point");
  add("arclength_consistent", slope_bound,
      slope_bound ? "f'^2 <= 1 on the grid" : "f'^2 > 1 at a grid point");

  bool single_max = sign_changes == 1 && crit_s > 0.0;
  double fdd = single_max ? profile.ddf(crit_s) : 0.0;
  if (single_max) {
    std::snprintf(buf, sizeof buf, "critical point near s=%.6g, f''=%.6g", crit_s, fdd);
  } else {
    std::snprintf(buf, sizeof buf, "%d sign changes of f' on the grid", sign_changes);
  }
  add("simple_profile", single_max && fdd < 0.0, buf);

  return rep;
}

double area(const SurfaceProfile& profile, double quad_tol) {
  if (profile.length <= 0.0) return 0.0;
  auto res = integrate_de([&profile](double s) { return profile.f(s); }, 0.0,
                          profile.length, quad_tol);
  return 2.0 * kPi * res.value;
}

ObservableSpec make_observable(const std::string& kind,
                               const std::map<std::string, double>& params) {
  ObservableSpec obs;
  obs.kind = kind;
  obs.params = params;
  if (kind == "cos2s" || kind == "cos_s") {
    obs.depends_on_theta = false;
  } else if (kind == "bump") {
    obs.depends_on_theta = false;
    if (get_param(params, "beta", 1.0) < 0.0)
      throw ParamOutOfRange("bump: beta must be >= 0");
  } else if (kind == "theta_coupled") {
    obs.depends_on_theta = get_param(params, "eta", 0.0) != 0.0;
  } else {
    throw UnknownObservable("unknown observable kind: " + kind);
  }
  return obs;
}

double eval_observable(const ObservableSpec& obs, double s, double theta) {
  if (obs.kind == "cos2s") {
    double c = std::cos(s);
    return c * c;
  }
  if (obs.kind == "cos_s") return std::cos(s);
  if (obs.kind == "bump") {
    double beta = get_param(obs.params, "beta", 1.0);
    double s1 = get_param(obs.params, "s1", 0.0);
    double scale = get_param(obs.params, "scale", 1.0);
    double d = s - s1;
    return scale * std::exp(-beta * d * d);
  }
  if (obs.kind == "theta_coupled") {
    // cos^2 s + eta e^{s - pi/2} cos(theta): the angular factor is weighted
    // asymmetrically in s, otherwise closed-orbit averages of the coupling
    // cancel by the mirror symmetry of the catalog profiles
    double eta = get_param(obs.params, "eta", 0.0);
    double c = std::cos(s);
    return c * c + eta * std::exp(s - kPi / 2) * std::cos(theta);
  }
  throw UnknownObservable("unknown observable kind: " + obs.kind);
}

double theta_average(const ObservableSpec& obs, double s) {
  if (!obs.depends_on_theta) return eval_observable(obs, s, 0.0);
  // trapezoid on the periodic angle: exact for the catalog's cos(theta) term
  constexpr int n = 64;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += eval_observable(obs, s, 2.0 * kPi * i / n);
  return sum / n;
}

}  // namespace weylband
