#include "weylband/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "weylband/errors.hpp"
#include "weylband/quadrature.hpp"

namespace weylband {

namespace {

struct Radicand {
  const SurfaceProfile* profile;
  double abs_a;
  TurningPoints tp;
  double switch_left = 0.0;  // Taylor step-off distances per endpoint
  double switch_right = 0.0;

  // sqrt(f(s)^2 - a^2) with d = distance to the nearest turning point.
  // Direct evaluation of f - |a| cancels catastrophically for small d, so
  // below the step-off we Taylor-expand from the turning point, treating the
  // polished root as exact. That shifts the torus by one ulp of |a| but
  // keeps the radicand positive and smooth all the way into the endpoint,
  // which the clamped direct form cannot do.
  double sqrt_r(double s, double d) const {
    const auto& pr = *profile;
    double f = pr.f(s);
    double fma;  // f - |a|
    bool left = s < 0.5 * (tp.s_minus + tp.s_plus);
    if (abs_a > 0.0 && d < (left ? switch_left : switch_right)) {
      double se = left ? tp.s_minus : tp.s_plus;
      double sgn = left ? 1.0 : -1.0;
      fma = sgn * pr.df(se) * d + 0.5 * pr.ddf(se) * d * d;
    } else {
      fma = f - abs_a;
    }
    double r = fma * (f + abs_a);
    return std::sqrt(std::max(0.0, r));
  }
};

// Step-off balancing the direct form's cancellation (eps |a| / (f' d))
// against the quadratic Taylor truncation (f''' d^2 / (6 f')): the crossover
// sits at (6 eps |a| / f''')^{1/3} independently of f', which matters for
// near-equatorial tori where f' at the turning points is tiny.
double taylor_switch(const SurfaceProfile& profile, double se, double abs_a,
                     double interval) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double delta = 1e-4;
  double f3 = std::abs(profile.ddf(se + delta) - profile.ddf(se - delta)) / (2 * delta);
  double d = std::cbrt(6.0 * eps * std::max(abs_a, 1e-3) / std::max(f3, 1e-8));
  return std::clamp(d, 1e-6, 0.45 * interval);
}

Radicand make_radicand(const SurfaceProfile& profile, const TurningPoints& tp, double a) {
  Radicand rad{&profile, std::abs(a), tp, 0.0, 0.0};
  double interval = tp.s_plus - tp.s_minus;
  if (rad.abs_a > 0.0) {
    rad.switch_left = taylor_switch(profile, tp.s_minus, rad.abs_a, interval);
    rad.switch_right = taylor_switch(profile, tp.s_plus, rad.abs_a, interval);
  }
  return rad;
}

double bisect_radius(const SurfaceProfile& profile, double lo, double hi, double target,
                     bool increasing) {
  // invariant: f(lo) - target and f(hi) - target have opposite signs
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    double v = profile.f(mid) - target;
    bool below = increasing ? (v < 0.0) : (v > 0.0);
    if (below)
      lo = mid;
    else
      hi = mid;
  }
  double s = 0.5 * (lo + hi);
  // Newton polish so the residual at the root is at roundoff level
  for (int it = 0; it < 3; ++it) {
    double fp = profile.df(s);
    if (fp == 0.0) break;
    s -= (profile.f(s) - target) / fp;
  }
  return std::clamp(s, lo - 1e-12, hi + 1e-12);
}

}  // namespace

double symbol_p(const SurfaceProfile& profile, const FlowState& state) {
  double f = profile.f(state.s);
  return state.sigma * state.sigma + state.theta_star * state.theta_star / (f * f);
}

TurningPoints turning_points(const SurfaceProfile& profile, double a, double tol) {
  double abs_a = std::abs(a);
  if (abs_a <= 0.0 || abs_a >= profile.apex_radius)
    throw std::invalid_argument("turning_points: need 0 < |a| < apex radius");
  if (profile.apex_radius - abs_a < tol)
    throw DegenerateTorus("torus too close to the equatorial leaf: apex - |a| = " +
                          std::to_string(profile.apex_radius - abs_a));
  TurningPoints tp;
  tp.s_minus = bisect_radius(profile, 0.0, profile.apex_s, abs_a, true);
  tp.s_plus = bisect_radius(profile, profile.apex_s, profile.length, abs_a, false);
  return tp;
}

double torus_integral(const SurfaceProfile& profile, const TurningPoints& tp, double a,
                      const std::function<double(double, double)>& g, double quad_tol) {
  Radicand rad = make_radicand(profile, tp, a);
  // near the equatorial leaf, f - |a| carries at most ~16 - log10(kappa)
  // digits; the requested tolerance is widened by that conditioning limit
  double gap = std::max(profile.apex_radius - rad.abs_a, 1e-300);
  double kappa = std::numeric_limits<double>::epsilon() * rad.abs_a / gap;
  double tol = std::max(quad_tol, 100.0 * kappa);
  auto f = [&](double s, double d) { return g(s, rad.sqrt_r(s, d)); };
  return integrate_de2(f, tp.s_minus, tp.s_plus, tol).value;
}

namespace {

TurningPoints libration_interval(const SurfaceProfile& profile, double a, double tol) {
  if (a == 0.0) return {0.0, profile.length};
  return turning_points(profile, a, tol);
}

double weight_j1(const SurfaceProfile& profile, const TurningPoints& tp, double a,
                 double quad_tol) {
  return torus_integral(
      profile, tp, a,
      [&profile](double s, double sr) { return profile.f(s) / std::max(sr, 1e-300); },
      quad_tol);
}

}  // namespace

double rotation_number(const SurfaceProfile& profile, double a, double quad_tol) {
  if (a == 0.0)
    throw std::invalid_argument("rotation_number: undefined on the meridian family");
  TurningPoints tp = turning_points(profile, a, 1e-14);
  double integral = torus_integral(
      profile, tp, a,
      [&profile](double s, double sr) {
        double f = profile.f(s);
        return 1.0 / std::max(f * sr, 1e-300);
      },
      quad_tol);
  return a / std::numbers::pi * integral;
}

double action_iota(const SurfaceProfile& profile, double a, double quad_tol) {
  if (std::abs(a) >= profile.apex_radius) {
    if (std::abs(a) - profile.apex_radius < 1e-14) return 0.0;  // collapsed libration
    throw std::invalid_argument("action_iota: |a| exceeds the apex radius");
  }
  TurningPoints tp = libration_interval(profile, a, 1e-14);
  double integral = torus_integral(
      profile, tp, a,
      [&profile](double s, double sr) {
        double f = profile.f(s);
        return f > 0.0 ? sr / f : 1.0;  // limit value 1 at the poles when a = 0
      },
      quad_tol);
  return integral / std::numbers::pi;
}

double weight_J(const SurfaceProfile& profile, const std::function<double(double)>& psi,
                double a, double quad_tol) {
  TurningPoints tp = libration_interval(profile, a, 1e-14);
  return torus_integral(
      profile, tp, a,
      [&profile, &psi](double s, double sr) {
        return psi(s) * profile.f(s) / std::max(sr, 1e-300);
      },
      quad_tol);
}

double torus_average(const SurfaceProfile& profile, const ObservableSpec& obs, double a,
                     double quad_tol) {
  auto qbar = [&obs](double s) { return theta_average(obs, s); };
  double num = weight_J(profile, qbar, a, quad_tol);
  double den = weight_J(profile, [](double) { return 1.0; }, a, quad_tol);
  return num / den;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with the standard quartic continuous extension and
// error-per-unit-step control, so the accumulated drift stays O(tol * T).

namespace dp5 {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace dp5

class FlowIntegrator {
public:
  FlowIntegrator(const SurfaceProfile& profile, double theta_star, double ode_tol,
                 const ObservableSpec* averaged_obs)
      : profile_(profile), theta_star_(theta_star), tol_(ode_tol), obs_(averaged_obs) {
    dim_ = obs_ ? 4 : 3;
  }

  // y = (s, sigma, theta [, w]) with w' = q(s, theta)
  void rhs(const double* y, double* dy) const {
    double f = profile_.f(y[0]);
    double fp = profile_.df(y[0]);
    double f3 = f * f * f;
    dy[0] = 2.0 * y[1];
    dy[1] = 2.0 * theta_star_ * theta_star_ * fp / f3;
    dy[2] = 2.0 * theta_star_ / (f * f);
    if (dim_ == 4) dy[3] = eval_observable(*obs_, y[0], y[2]);
  }

  // integrate to T; when traj != nullptr, record the dense interpolant
  void run(const FlowState& state0, double T, Trajectory* traj, double* w_out) {
    double y[4] = {state0.s, state0.sigma, state0.theta, 0.0};
    double k1[4], k2[4], k3[4], k4[4], k5[4], k6[4], k7[4], ytmp[4], ynew[4];
    rhs(y, k1);
    double p0 = symbol_p(profile_, state0);
    double t = 0.0;
    double h = std::min(1e-3, T);
    double max_drift = 0.0;
    long steps = 0;
    const long max_steps = 50'000'000;

    while (t < T) {
      if (++steps > max_steps)
        throw StepFailure("flow integration exceeded the step budget");
      bool last = false;
      if (t + h >= T) {
        h = T - t;
        last = true;
      }
      for (int i = 0; i < dim_; ++i) ytmp[i] = y[i] + h * dp5::a21 * k1[i];
      rhs(ytmp, k2);
      for (int i = 0; i < dim_; ++i)
        ytmp[i] = y[i] + h * (dp5::a31 * k1[i] + dp5::a32 * k2[i]);
      rhs(ytmp, k3);
      for (int i = 0; i < dim_; ++i)
        ytmp[i] = y[i] + h * (dp5::a41 * k1[i] + dp5::a42 * k2[i] + dp5::a43 * k3[i]);
      rhs(ytmp, k4);
      for (int i = 0; i < dim_; ++i)
        ytmp[i] = y[i] + h * (dp5::a51 * k1[i] + dp5::a52 * k2[i] + dp5::a53 * k3[i] +
                              dp5::a54 * k4[i]);
      rhs(ytmp, k5);
      for (int i = 0; i < dim_; ++i)
        ytmp[i] = y[i] + h * (dp5::a61 * k1[i] + dp5::a62 * k2[i] + dp5::a63 * k3[i] +
                              dp5::a64 * k4[i] + dp5::a65 * k5[i]);
      rhs(ytmp, k6);
      for (int i = 0; i < dim_; ++i)
        ynew[i] = y[i] + h * (dp5::b1 * k1[i] + dp5::b3 * k3[i] + dp5::b4 * k4[i] +
                              dp5::b5 * k5[i] + dp5::b6 * k6[i]);
      rhs(ynew, k7);

      double err = 0.0;
      for (int i = 0; i < dim_; ++i) {
        double ei = h * (dp5::e1 * k1[i] + dp5::e3 * k3[i] + dp5::e4 * k4[i] +
                         dp5::e5 * k5[i] + dp5::e6 * k6[i] + dp5::e7 * k7[i]);
        double sc = tol_ * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / dim_);
      double e_unit = err / h;  // error per unit time, target <= 1

      if (e_unit <= 1.0) {
        if (traj) {
          Trajectory::Step st;
          st.t0 = t;
          st.h = h;
          for (int i = 0; i < 3; ++i) {
            double ydiff = ynew[i] - y[i];
            st.r1[i] = y[i];
            st.r2[i] = ydiff;
            st.r3[i] = h * k1[i] - ydiff;
            st.r4[i] = ydiff - h * k7[i] - st.r3[i];
            st.r5[i] = h * (dp5::d1 * k1[i] + dp5::d3 * k3[i] + dp5::d4 * k4[i] +
                            dp5::d5 * k5[i] + dp5::d6 * k6[i] + dp5::d7 * k7[i]);
          }
          traj->steps_.push_back(st);
          if (y[1] != 0.0 && ynew[1] != 0.0 && std::signbit(y[1]) != std::signbit(ynew[1]))
            traj->turning_times_.push_back(locate_turning(traj->steps_.back()));
        }
        t += h;
        for (int i = 0; i < dim_; ++i) y[i] = ynew[i];
        for (int i = 0; i < dim_; ++i) k1[i] = k7[i];  // FSAL
        FlowState cur{y[0], y[2], y[1], theta_star_};
        double drift = std::abs(symbol_p(profile_, cur) - p0) / p0;
        max_drift = std::max(max_drift, drift);
        if (last) break;
      }

      double fac = 0.9 * std::pow(std::max(e_unit, 1e-10), -0.25);
      h *= std::clamp(fac, 0.2, 5.0);
      if (h < 1e-12)
        throw StepFailure("flow integration step underflow near a turning point");
    }

    if (traj) {
      traj->theta_star_ = theta_star_;
      traj->t_end_ = T;
      traj->max_energy_drift_ = max_drift;
    }
    if (w_out) *w_out = y[3];
  }

private:
  static double eval_component(const Trajectory::Step& st, int i, double th) {
    double th1 = 1.0 - th;
    return st.r1[i] +
           th * (st.r2[i] + th1 * (st.r3[i] + th * (st.r4[i] + th1 * st.r5[i])));
  }

  static double locate_turning(const Trajectory::Step& st) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      double s_lo = eval_component(st, 1, lo);
      double s_mid = eval_component(st, 1, mid);
      if (s_lo == 0.0) return st.t0;
      if (std::signbit(s_lo) != std::signbit(s_mid))
        hi = mid;
      else
        lo = mid;
    }
    return st.t0 + 0.5 * (lo + hi) * st.h;
  }

  friend class Trajectory;
  const SurfaceProfile& profile_;
  double theta_star_;
  double tol_;
  const ObservableSpec* obs_;
  int dim_;
};

FlowState Trajectory::eval(double t) const {
  t = std::clamp(t, 0.0, t_end_);
  if (meridian_) {
    double u = mer_s0_ + 2.0 * mer_sigma0_ * t;
    double L = mer_length_;
    double w = std::fmod(std::fmod(u, 2.0 * L) + 2.0 * L, 2.0 * L);
    double s = w <= L ? w : 2.0 * L - w;
    double dir = w <= L ? 1.0 : -1.0;
    double crossings = std::abs(std::floor(u / L));
    FlowState st;
    st.s = s;
    st.sigma = dir * std::abs(mer_sigma0_) * (mer_sigma0_ >= 0 ? 1.0 : -1.0);
    st.theta = mer_theta0_ + std::numbers::pi * crossings;
    st.theta_star = 0.0;
    return st;
  }
  // binary search for the covering step
  std::size_t lo = 0, hi = steps_.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (steps_[mid].t0 <= t)
      lo = mid;
    else
      hi = mid;
  }
  const Step& st = steps_[lo];
  double th = st.h > 0 ? (t - st.t0) / st.h : 0.0;
  th = std::clamp(th, 0.0, 1.0);
  double th1 = 1.0 - th;
  FlowState out;
  double y[3];
  for (int i = 0; i < 3; ++i)
    y[i] = st.r1[i] + th * (st.r2[i] + th1 * (st.r3[i] + th * (st.r4[i] + th1 * st.r5[i])));
  out.s = y[0];
  out.sigma = y[1];
  out.theta = y[2];
  out.theta_star = theta_star_;
  return out;
}

Trajectory make_meridian_trajectory(const SurfaceProfile& profile, const FlowState& state0,
                                    double T) {
  Trajectory traj;
  traj.meridian_ = true;
  traj.mer_s0_ = state0.s;
  traj.mer_sigma0_ = state0.sigma;
  traj.mer_theta0_ = state0.theta;
  traj.mer_length_ = profile.length;
  traj.t_end_ = T;
  traj.theta_star_ = 0.0;
  traj.max_energy_drift_ = 0.0;
  if (state0.sigma != 0.0) {
    double L = profile.length;
    double v = 2.0 * std::abs(state0.sigma);
    double s = state0.sigma > 0 ? state0.s : L - state0.s;
    // pole passage times of the folded linear motion
    for (double tc = (L - s) / v; tc <= T; tc += L / v) traj.turning_times_.push_back(tc);
  }
  return traj;
}

Trajectory flow_integrate(const SurfaceProfile& profile, const FlowState& state0, double T,
                          double ode_tol) {
  if (!(symbol_p(profile, state0) > 0.0))
    throw std::invalid_argument("flow_integrate: initial energy must be positive");
  if (state0.theta_star == 0.0) return make_meridian_trajectory(profile, state0, T);
  Trajectory traj;
  FlowIntegrator integ(profile, state0.theta_star, ode_tol, nullptr);
  integ.run(state0, T, &traj, nullptr);
  return traj;
}

double flow_average(const SurfaceProfile& profile, const ObservableSpec& obs,
                    const FlowState& state0, double T, double ode_tol) {
  if (!(symbol_p(profile, state0) > 0.0))
    throw std::invalid_argument("flow_average: initial energy must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("flow_average: T must be positive");
  if (state0.theta_star == 0.0) {
    // meridian: the rotation angle is constant between pole passages, so the
    // time average reduces to arclength integrals over the sweeps
    Trajectory traj = make_meridian_trajectory(profile, state0, T);
    double v = 2.0 * std::abs(state0.sigma);
    if (v == 0.0) throw std::invalid_argument("flow_average: stationary state");
    std::vector<double> cuts{0.0};
    for (double tc : traj.turning_times())
      if (tc < T) cuts.push_back(tc);
    cuts.push_back(T);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      FlowState mid = traj.eval(0.5 * (cuts[j] + cuts[j + 1]));
      double s_from = traj.eval(cuts[j]).s;
      double s_to = traj.eval(cuts[j + 1]).s;
      auto res = integrate_de(
          [&](double s) { return eval_observable(obs, s, mid.theta); },
          std::min(s_from, s_to), std::max(s_from, s_to), 1e-12);
      total += res.value / v;
    }
    return total / T;
  }
  FlowIntegrator integ(profile, state0.theta_star, ode_tol, &obs);
  double w = 0.0;
  integ.run(state0, T, nullptr, &w);
  return w / T;
}

// ---------------------------------------------------------------------------

DiophantineClass diophantine_class(double omega, double c0, double n0, std::int64_t q_max,
                                   double rational_tol) {
  if (!std::isfinite(omega))
    throw std::invalid_argument("diophantine_class: omega must be finite");
  DiophantineClass out;
  out.c0 = c0;
  out.n0 = n0;
  out.q_max = q_max;
  out.rational_tol = rational_tol;

  // continued-fraction convergents p_k/q_k of omega with q_k <= q_max
  double x = omega;
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p_cur = static_cast<std::int64_t>(std::floor(x));
  std::int64_t q_cur = 1;
  double frac = x - std::floor(x);
  bool all_dioph = true;
  for (int k = 0; k < 64; ++k) {
    double approx = static_cast<double>(p_cur) / static_cast<double>(q_cur);
    double err = std::abs(omega - approx);
    // rational when the convergent overshoots its generic 1/q^2 accuracy by
    // the tolerance factor; a bare |omega - p/q| < tol test would label every
    // sufficiently deep convergent of an irrational as rational
    if (err * static_cast<double>(q_cur) * static_cast<double>(q_cur) < rational_tol) {
      out.kind = RationalityKind::rational;
      out.p = p_cur;
      out.q = q_cur;
      return out;
    }
    if (err < 1.0 / (c0 * std::pow(static_cast<double>(q_cur), n0))) all_dioph = false;
    if (frac <= std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1.0)) break;
    x = 1.0 / frac;
    double integer_part = std::floor(x);
    if (integer_part > 9e17) break;
    std::int64_t ak = static_cast<std::int64_t>(integer_part);
    frac = x - integer_part;
    // the q_max cut also guards the recurrence against int64 overflow
    if (ak > (q_max - q_prev) / q_cur) break;
    std::int64_t p_next = ak * p_cur + p_prev;
    std::int64_t q_next = ak * q_cur + q_prev;
    if (q_next > q_max) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
  }
  out.kind = all_dioph ? RationalityKind::numerically_diophantine : RationalityKind::undecided;
  return out;
}

namespace {

// closed-orbit average on a rational torus, started at the inner turning
// point with the given rotation angle
double orbit_average(const SurfaceProfile& profile, const ObservableSpec& obs, double a,
                     const TurningPoints& tp, double period, double theta0,
                     double ode_tol) {
  FlowState st;
  st.s = tp.s_minus;
  st.sigma = 0.0;
  st.theta = theta0;
  st.theta_star = a;
  return flow_average(profile, obs, st, period, ode_tol);
}

Interval meridian_qinf(const SurfaceProfile& profile, const ObservableSpec& obs,
                       const QInfinityConfig& cfg) {
  // meridian geodesics alternate between theta0 and theta0 + pi; the orbit
  // average is the arclength mean of the two restrictions
  double L = profile.length;
  if (!obs.depends_on_theta) {
    auto res = integrate_de([&](double s) { return eval_observable(obs, s, 0.0); }, 0.0, L,
                            cfg.quad_tol);
    double v = res.value / L;
    return {v, v};
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  int n = cfg.theta_grid;
  for (int i = 0; i < n; ++i) {
    double th = std::numbers::pi * i / n;  // theta and theta+pi pair up
    auto res = integrate_de(
        [&](double s) {
          return eval_observable(obs, s, th) + eval_observable(obs, s, th + std::numbers::pi);
        },
        0.0, L, cfg.quad_tol);
    double v = res.value / (2.0 * L);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

Interval q_infinity(const SurfaceProfile& profile, const ObservableSpec& obs, double a,
                    const QInfinityConfig& cfg) {
  double abs_a = std::abs(a);
  double fmax = profile.apex_radius;
  if (abs_a > fmax + cfg.degenerate_tol)
    throw std::invalid_argument("q_infinity: |a| exceeds the apex radius");

  if (fmax - abs_a <= cfg.degenerate_tol) {
    // equatorial leaf: the orbit is the equator itself
    double v = theta_average(obs, profile.apex_s);
    return {v, v};
  }
  if (a == 0.0) return meridian_qinf(profile, obs, cfg);
  if (!obs.depends_on_theta) {
    double v = torus_average(profile, obs, a, cfg.quad_tol);
    return {v, v};
  }

  double omega = rotation_number(profile, a, cfg.quad_tol);
  DiophantineClass cls = diophantine_class(omega, cfg.dioph.c0, cfg.dioph.n0,
                                           cfg.dioph.q_max, cfg.dioph.rational_tol);
  if (cls.kind != RationalityKind::rational) {
    double v = torus_average(profile, obs, a, cfg.quad_tol);
    return {v, v};
  }

  TurningPoints tp = turning_points(profile, a, 1e-14);
  double t_libration = weight_j1(profile, tp, a, cfg.quad_tol);  // at unit energy
  double period = static_cast<double>(cls.q) * t_libration;

  Interval prev{0.0, 0.0};
  bool have_prev = false;
  int n = cfg.theta_grid;
  for (int round = 0; round <= cfg.max_refinements; ++round) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * std::numbers::pi * i / n;
      double v = orbit_average(profile, obs, a, tp, period, th, cfg.ode_tol);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    Interval cur{lo, hi};
    if (have_prev && std::abs(cur.lo - prev.lo) < cfg.refine_tol &&
        std::abs(cur.hi - prev.hi) < cfg.refine_tol)
      return cur;
    prev = cur;
    have_prev = true;
    n *= 4;
  }
  throw UndecidedRationality(
      "orbit averages did not stabilize under starting-angle refinement at a = " +
      std::to_string(a));
}

ClassicalInvariants classical_invariants(const SurfaceProfile& profile,
                                         const ObservableSpec& obs, double a,
                                         const QInfinityConfig& cfg) {
  ClassicalInvariants inv;
  inv.a = a;
  if (a == 0.0) {
    inv.omega = 0.0;  // meridians close over the poles; label them rational
    inv.dioph =
        diophantine_class(0.0, cfg.dioph.c0, cfg.dioph.n0, cfg.dioph.q_max,
                          cfg.dioph.rational_tol);
  } else {
    inv.omega = rotation_number(profile, a, cfg.quad_tol);
    inv.dioph = diophantine_class(inv.omega, cfg.dioph.c0, cfg.dioph.n0, cfg.dioph.q_max,
                                  cfg.dioph.rational_tol);
  }
  inv.iota = action_iota(profile, a, cfg.quad_tol);
  inv.j1 = weight_J(profile, [](double) { return 1.0; }, a, cfg.quad_tol);
  inv.q_avg = torus_average(profile, obs, a, cfg.quad_tol);
  inv.q_inf = q_infinity(profile, obs, a, cfg);
  return inv;
}

}  // namespace weylband
