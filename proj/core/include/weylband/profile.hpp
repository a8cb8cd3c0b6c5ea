#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace weylband {

/// Analytic surface-of-revolution profile, parametrized by meridian
/// arclength s in [0, length]. Only the radius function enters any
/// computation; the height derivative is exposed for plotting.
///
/// Invariants (checked by validate_profile):
///   radius(0) = radius(length) = 0, radius > 0 inside,
///   radius'(0) = 1, radius'(length) = -1, radius'^2 <= 1,
///   a single interior maximum at apex_s with radius'' < 0.
struct SurfaceProfile {
  double length = 0.0;
  std::function<double(double)> radius;
  std::function<double(double)> radius_d;
  std::function<double(double)> radius_dd;
  double apex_s = 0.0;
  double apex_radius = 0.0;
  std::string family;
  std::map<std::string, double> params;

  double f(double s) const { return radius(s); }
  double df(double s) const { return radius_d(s); }
  double ddf(double s) const { return radius_dd(s); }
  // height derivative along the meridian, sqrt(1 - radius'^2); plots only
  double height_d(double s) const;
};

/// Observable from the built-in catalog. Catalog members are real valued
/// and analytic; configs stay pure data this way.
struct ObservableSpec {
  std::string kind;
  std::map<std::string, double> params;
  bool depends_on_theta = false;
};

struct ProfileCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ProfileCheck> checks;
  bool all_passed() const;
};

// Catalog families: "sphere" (radius sin s, length pi) and
// "perturbed_sphere" with parameter c in (-1/3, 1/6], radius sin s + c sin^3 s.
SurfaceProfile make_profile(const std::string& family_tag,
                            const std::map<std::string, double>& params);

// Grid sampling plus derivative sign analysis of every profile invariant.
// Failures are carried in the report, never thrown.
ValidationReport validate_profile(const SurfaceProfile& profile, int grid_n);

// Riemannian area 2*pi*Int radius ds to relative quad_tol.
double area(const SurfaceProfile& profile, double quad_tol);

// Catalog observables: "cos2s", "cos_s", "bump" (beta, s1),
// "theta_coupled" (eta): cos^2 s + eta * cos(theta).
ObservableSpec make_observable(const std::string& kind,
                               const std::map<std::string, double>& params);

double eval_observable(const ObservableSpec& obs, double s, double theta);

// Average of the observable over the rotation angle at fixed s; exact for
// trigonometric polynomials in theta (catalog members are).
double theta_average(const ObservableSpec& obs, double s);

}  // namespace weylband
