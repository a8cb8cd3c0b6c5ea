#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "weylband/profile.hpp"

namespace weylband {

// Torus label: normalized angular momentum at unit energy, |a| < apex_radius.
// a = 0 is the meridian family, |a| = apex_radius the equatorial leaf.

struct TurningPoints {
  double s_minus = 0.0;
  double s_plus = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

enum class RationalityKind { rational, numerically_diophantine, undecided };

struct DiophantineClass {
  RationalityKind kind = RationalityKind::undecided;
  std::int64_t p = 0;  // valid for kind == rational
  std::int64_t q = 1;
  // parameters the operational test ran with
  double c0 = 0.0;
  double n0 = 0.0;
  std::int64_t q_max = 0;
  double rational_tol = 0.0;
};

struct DiophantineParams {
  double c0 = 10.0;
  double n0 = 3.0;
  std::int64_t q_max = 100000;
  double rational_tol = 1e-9;
};

struct ClassicalInvariants {
  double a = 0.0;
  double omega = 0.0;    // rotation number; 0 on the meridian family
  double iota = 0.0;     // libration action (1/pi) Int sqrt(1 - a^2/f^2) ds
  double j1 = 0.0;       // half-period weight J(1, a)
  double q_avg = 0.0;    // torus average of the observable
  Interval q_inf;        // accumulation interval of long-time flow averages
  DiophantineClass dioph;
};

struct FlowState {
  double s = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double theta_star = 0.0;
};

// leading symbol sigma^2 + theta_star^2 / f(s)^2
double symbol_p(const SurfaceProfile& profile, const FlowState& state);

// Dense-output trajectory of the geodesic flow. Steps hold the quartic
// interpolant of the embedded pair; the meridian case (theta_star = 0) is
// propagated in closed form with pole reflections.
class Trajectory {
public:
  FlowState eval(double t) const;
  double t_end() const { return t_end_; }
  double max_energy_drift() const { return max_energy_drift_; }
  const std::vector<double>& turning_times() const { return turning_times_; }

private:
  struct Step {
    double t0 = 0.0;
    double h = 0.0;
    // Hairer-style continuous extension, 3 state components each
    double r1[3], r2[3], r3[3], r4[3], r5[3];
  };
  friend class FlowIntegrator;
  friend Trajectory make_meridian_trajectory(const SurfaceProfile& profile,
                                             const FlowState& state0, double T);
  std::vector<Step> steps_;
  std::vector<double> turning_times_;
  double theta_star_ = 0.0;
  double t_end_ = 0.0;
  double max_energy_drift_ = 0.0;
  // meridian closed form
  bool meridian_ = false;
  double mer_s0_ = 0.0, mer_sigma0_ = 0.0, mer_theta0_ = 0.0, mer_length_ = 0.0;
};

struct QInfinityConfig {
  double quad_tol = 1e-10;
  double ode_tol = 1e-10;
  DiophantineParams dioph;
  int theta_grid = 64;       // starting-angle grid for closed-orbit averages
  double refine_tol = 1e-6;  // stop refining when endpoints move less
  int max_refinements = 3;   // grid grows x4 per round
  double degenerate_tol = 1e-12;
};

// f(s_pm) = |a| with s_minus < apex_s < s_plus, bisection plus Newton polish.
TurningPoints turning_points(const SurfaceProfile& profile, double a, double tol);

// (a/pi) Int f^-2 (1 - a^2/f^2)^{-1/2} ds over the libration interval.
double rotation_number(const SurfaceProfile& profile, double a, double quad_tol);

// (1/pi) Int sqrt(1 - a^2/f^2) ds; runs over [0, length] when a = 0.
double action_iota(const SurfaceProfile& profile, double a, double quad_tol);

// J(psi, a) = Int psi(s) f / sqrt(f^2 - a^2) ds over the libration interval.
double weight_J(const SurfaceProfile& profile, const std::function<double(double)>& psi,
                double a, double quad_tol);

// Torus average in action-angle measure: J(q_theta_avg, a) / J(1, a).
double torus_average(const SurfaceProfile& profile, const ObservableSpec& obs, double a,
                     double quad_tol);

Trajectory flow_integrate(const SurfaceProfile& profile, const FlowState& state0, double T,
                          double ode_tol);

// (1/T) Int q(flow(t)) dt, via an augmented quadrature component.
double flow_average(const SurfaceProfile& profile, const ObservableSpec& obs,
                    const FlowState& state0, double T, double ode_tol);

Interval q_infinity(const SurfaceProfile& profile, const ObservableSpec& obs, double a,
                    const QInfinityConfig& cfg);

DiophantineClass diophantine_class(double omega, double c0, double n0, std::int64_t q_max,
                                   double rational_tol);

ClassicalInvariants classical_invariants(const SurfaceProfile& profile,
                                         const ObservableSpec& obs, double a,
                                         const QInfinityConfig& cfg);

// Shared kernel for the libration-interval integrals: integrates
// g(s, sqrt(f^2 - a^2)) with the radicand evaluated cancellation-free near
// the turning points (Taylor step-off below ~1e-5 arclength).
double torus_integral(const SurfaceProfile& profile, const TurningPoints& tp, double a,
                      const std::function<double(double, double)>& g, double quad_tol);

}  // namespace weylband
