#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "weylband/classical.hpp"
#include "weylband/errors.hpp"
#include "weylband/profile.hpp"

using namespace weylband;

namespace {
constexpr double kPi = std::numbers::pi;
const SurfaceProfile kSphere = make_profile("sphere", {});
const SurfaceProfile kPert = make_profile("perturbed_sphere", {{"c", 0.15}});
const ObservableSpec kCos2 = make_observable("cos2s", {});
}  // namespace

TEST_CASE("turning points on the sphere: sin s = 1/2") {
  TurningPoints tp = turning_points(kSphere, 0.5, 1e-12);
  CHECK(tp.s_minus == doctest::Approx(kPi / 6).epsilon(1e-12));
  CHECK(tp.s_plus == doctest::Approx(5 * kPi / 6).epsilon(1e-12));
  CHECK_THROWS_AS(turning_points(kSphere, 1.0 - 1e-15, 1e-12), DegenerateTorus);
}

TEST_CASE("turning points bracket the perturbed profile to 1e-12") {
  for (double a : {0.2, 0.5, 0.9, 1.1}) {
    TurningPoints tp = turning_points(kPert, a, 1e-13);
    CHECK(std::abs(kPert.f(tp.s_minus) - a) < 1e-12);
    CHECK(std::abs(kPert.f(tp.s_plus) - a) < 1e-12);
    CHECK(tp.s_minus < kPert.apex_s);
    CHECK(tp.s_plus > kPert.apex_s);
  }
}

TEST_CASE("sphere rotation number is +-1") {
  for (double a : {0.05, 0.3, 0.5, 0.77, 0.95}) {
    CHECK(rotation_number(kSphere, a, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rotation_number(kSphere, -a, 1e-12) == doctest::Approx(-1.0).epsilon(1e-9));
    // independent high-order oracle through the sine substitution
    CHECK(oracles::rotation_number_oracle(kSphere, a) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("perturbed rotation number is not constant and matches the oracle") {
  double w3 = rotation_number(kPert, 0.3, 1e-12);
  double w7 = rotation_number(kPert, 0.7, 1e-12);
  CHECK(std::abs(w3 - w7) > 1e-4);
  CHECK(w3 == doctest::Approx(oracles::rotation_number_oracle(kPert, 0.3)).epsilon(1e-9));
  CHECK(w7 == doctest::Approx(oracles::rotation_number_oracle(kPert, 0.7)).epsilon(1e-9));
}

TEST_CASE("sphere action iota(a) = 1 - |a|") {
  CHECK(action_iota(kSphere, 0.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  for (double a : {0.1, 0.45, 0.8}) {
    CHECK(action_iota(kSphere, a, 1e-12) == doctest::Approx(1.0 - a).epsilon(1e-9));
    CHECK(action_iota(kSphere, -a, 1e-12) == doctest::Approx(1.0 - a).epsilon(1e-9));
  }
  CHECK(action_iota(kSphere, 1.0, 1e-12) == doctest::Approx(0.0));
  // perturbed family against the oracle
  for (double a : {0.25, 0.6, 1.0}) {
    CHECK(action_iota(kPert, a, 1e-12) ==
          doctest::Approx(oracles::action_oracle(kPert, a)).epsilon(1e-9));
  }
}

TEST_CASE("sphere weight integrals: J(1,a)=pi, J(cos,a)=0, J(cos^2,a)=pi(1-a^2)/2") {
  for (double a : {0.2, 0.5, 0.8}) {
    CHECK(weight_J(kSphere, [](double) { return 1.0; }, a, 1e-12) ==
          doctest::Approx(kPi).epsilon(1e-10));
    CHECK(weight_J(kSphere, [](double s) { return std::cos(s); }, a, 1e-12) ==
          doctest::Approx(0.0).epsilon(1e-10));
    double expected = kPi * (1.0 - a * a) / 2.0;
    CHECK(weight_J(kSphere, [](double s) { return std::cos(s) * std::cos(s); }, a, 1e-12) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("torus averages") {
  for (double a : {0.3, 0.6, 0.9}) {
    CHECK(torus_average(kSphere, kCos2, a, 1e-12) ==
          doctest::Approx((1.0 - a * a) / 2.0).epsilon(1e-9));
  }
  CHECK(torus_average(kSphere, make_observable("cos_s", {}), 0.5, 1e-12) ==
        doctest::Approx(0.0).epsilon(1e-10));
  // the rotation-coupled part is killed by the angular average
  ObservableSpec coupled = make_observable("theta_coupled", {{"eta", 0.25}});
  CHECK(torus_average(kSphere, coupled, 0.5, 1e-12) ==
        doctest::Approx(torus_average(kSphere, kCos2, 0.5, 1e-12)).epsilon(1e-10));
  // perturbed family against the oracle
  for (double a : {0.3, 0.8}) {
    double expect = oracles::weight_oracle(
                        kPert, [](double s) { return std::cos(s) * std::cos(s); }, a) /
                    oracles::weight_oracle(kPert, [](double) { return 1.0; }, a);
    CHECK(torus_average(kPert, kCos2, a, 1e-12) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("parity in a") {
  for (double a : {0.25, 0.55, 0.85}) {
    CHECK(std::abs(rotation_number(kPert, -a, 1e-12) + rotation_number(kPert, a, 1e-12)) <
          1e-10);
    CHECK(std::abs(action_iota(kPert, -a, 1e-12) - action_iota(kPert, a, 1e-12)) < 1e-10);
    CHECK(std::abs(torus_average(kPert, kCos2, -a, 1e-12) -
                   torus_average(kPert, kCos2, a, 1e-12)) < 1e-10);
  }
}

TEST_CASE("Legendre identity pi (iota - a iota') = J(1, a)") {
  for (const SurfaceProfile* prof : {&kSphere, &kPert}) {
    double fmax = prof->apex_radius;
    for (double frac : {0.2, 0.5, 0.8}) {
      double a = frac * fmax;
      double step = 1e-4;
      // 5-point central difference for iota'
      auto iota = [&](double x) { return action_iota(*prof, x, 1e-12); };
      double d = (-iota(a + 2 * step) + 8 * iota(a + step) - 8 * iota(a - step) +
                  iota(a - 2 * step)) /
                 (12 * step);
      double lhs = kPi * (iota(a) - a * d);
      double rhs = weight_J(*prof, [](double) { return 1.0; }, a, 1e-12);
      CHECK(std::abs(lhs - rhs) < 1e-6);
    }
  }
}

TEST_CASE("action foliation completeness: (2 pi)^2 Int iota da = pi Area") {
  for (const SurfaceProfile* prof : {&kSphere, &kPert}) {
    double fmax = prof->apex_radius;
    // iota is even; integrate the half interval with a modest trapezoid on
    // top of high-accuracy evaluations plus the endpoint zeros
    int n = 2000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = fmax * (i + 0.5) / n;
      sum += action_iota(*prof, a, 1e-10);
    }
    double integral = 2.0 * sum * (fmax / n);
    double lhs = 4.0 * kPi * kPi * integral;
    double rhs = kPi * area(*prof, 1e-12);
    CHECK(lhs == doctest::Approx(rhs).epsilon(2e-6));
  }
}

TEST_CASE("equatorial geodesic stays put") {
  FlowState eq{kPi / 2, 0.0, 0.0, 1.0};
  Trajectory traj = flow_integrate(kSphere, eq, 5.0, 1e-12);
  FlowState end = traj.eval(5.0);
  CHECK(end.s == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(end.theta == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("energy conservation over T = 100") {
  TurningPoints tp = turning_points(kSphere, 0.5, 1e-12);
  FlowState st{tp.s_minus, 0.0, 0.0, 0.5};
  Trajectory traj = flow_integrate(kSphere, st, 100.0, 1e-12);
  CHECK(traj.max_energy_drift() <= 1e-9);
}

TEST_CASE("libration confinement between the turning parallels") {
  TurningPoints tp = turning_points(kPert, 0.6, 1e-12);
  FlowState st{tp.s_minus, 0.3, 0.0, 0.6};
  Trajectory traj = flow_integrate(kPert, st, 30.0, 1e-11);
  for (int i = 0; i <= 300; ++i) {
    FlowState cur = traj.eval(30.0 * i / 300);
    CHECK(cur.s >= tp.s_minus - 1e-8);
    CHECK(cur.s <= tp.s_plus + 1e-8);
  }
  CHECK(traj.turning_times().size() > 5);
}

TEST_CASE("flow averages converge to torus averages") {
  double a = 0.5;
  TurningPoints tp = turning_points(kSphere, a, 1e-12);
  FlowState st{tp.s_minus, 0.0, 0.0, a};
  // O(1/T) at a generic horizon
  double avg = flow_average(kSphere, kCos2, st, 200.0, 1e-10);
  CHECK(std::abs(avg - 0.375) < 0.02);
  // exact (to ODE tolerance) after one full libration period J(1,a)
  double period = weight_J(kSphere, [](double) { return 1.0; }, a, 1e-13);
  double avg_periodic = flow_average(kSphere, kCos2, st, period, 1e-12);
  CHECK(avg_periodic == doctest::Approx(0.375).epsilon(1e-8));
  // constant observable: bump with beta = 0 evaluates to its scale everywhere
  ObservableSpec c = make_observable("bump", {{"beta", 0.0}, {"scale", 0.7}});
  CHECK(flow_average(kSphere, c, st, 17.0, 1e-10) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("flow average error decays like 1/T on a nonresonant torus") {
  // perturbed sphere at an a whose rotation number classifies Diophantine
  double a_pick = -1.0;
  for (double a = 0.35; a < 0.8; a += 0.02) {
    double w = rotation_number(kPert, a, 1e-11);
    DiophantineClass cls = diophantine_class(w, 10.0, 3.0, 100000, 1e-9);
    if (cls.kind == RationalityKind::numerically_diophantine) {
      a_pick = a;
      break;
    }
  }
  REQUIRE(a_pick > 0.0);
  double target = torus_average(kPert, kCos2, a_pick, 1e-12);
  TurningPoints tp = turning_points(kPert, a_pick, 1e-12);
  std::vector<double> ts{50, 100, 200, 400}, errs;
  // the deviation oscillates along a single orbit; averaging over starting
  // angles exposes the 1/T envelope the fit is after
  for (double T : ts) {
    double acc = 0.0;
    for (int j = 0; j < 8; ++j) {
      FlowState st{tp.s_minus, 2 * kPi * j / 8, 0.0, a_pick};
      acc += std::abs(flow_average(kPert, kCos2, st, T, 1e-11) - target);
    }
    errs.push_back(acc / 8.0);
  }
  // least-squares slope of log err vs log T; 1/T decay gives slope near -1
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double x = std::log(ts[i]), y = std::log(std::max(errs[i], 1e-16));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(ts.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope >= 0.9);
}

TEST_CASE("q_infinity singletons for s-only observables") {
  Interval qi = q_infinity(kSphere, kCos2, 0.6, {});
  CHECK(qi.lo == doctest::Approx(0.32).epsilon(1e-9));
  CHECK(qi.length() == doctest::Approx(0.0));
  for (const SurfaceProfile* prof : {&kSphere, &kPert}) {
    for (const char* kind : {"cos2s", "cos_s"}) {
      ObservableSpec obs = make_observable(kind, {});
      for (double a : {0.25, 0.7}) {
        Interval iv = q_infinity(*prof, obs, a, {});
        CHECK(iv.length() == doctest::Approx(0.0));
        CHECK(iv.lo == doctest::Approx(torus_average(*prof, obs, a, 1e-10)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("q_infinity on the singular and meridian leaves") {
  Interval eq = q_infinity(kSphere, kCos2, 1.0, {});
  CHECK(eq.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eq.hi == doctest::Approx(0.0).epsilon(1e-12));
  Interval mer = q_infinity(kSphere, kCos2, 0.0, {});
  CHECK(mer.lo == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mer.length() == doctest::Approx(0.0));
}

TEST_CASE("q_infinity opens an interval on resonant tori of a coupled observable") {
  ObservableSpec coupled = make_observable("theta_coupled", {{"eta", 0.1}});
  QInfinityConfig cfg;
  cfg.ode_tol = 1e-10;
  cfg.theta_grid = 32;
  Interval qi = q_infinity(kSphere, coupled, 0.5, cfg);
  double avg = torus_average(kSphere, coupled, 0.5, 1e-10);
  CHECK(qi.length() > 1e-3);
  CHECK(qi.lo <= avg + 1e-9);
  CHECK(qi.hi >= avg - 1e-9);
}

TEST_CASE("diophantine classification") {
  DiophantineClass one = diophantine_class(1.0, 10, 3, 100000, 1e-9);
  CHECK(one.kind == RationalityKind::rational);
  CHECK(one.p == 1);
  CHECK(one.q == 1);

  double golden_frac = (std::sqrt(5.0) + 1.0) / 2.0 - 1.0;
  DiophantineClass g = diophantine_class(golden_frac, 3, 2, 1000000, 1e-12);
  CHECK(g.kind == RationalityKind::numerically_diophantine);

  DiophantineClass half = diophantine_class(0.5 + 1e-13, 10, 3, 100000, 1e-10);
  CHECK(half.kind == RationalityKind::rational);
  CHECK(half.p == 1);
  CHECK(half.q == 2);
}

TEST_CASE("classical invariants bundle") {
  QInfinityConfig cfg;
  ClassicalInvariants inv = classical_invariants(kSphere, kCos2, 0.6, cfg);
  CHECK(inv.omega == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(inv.iota == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(inv.j1 == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(inv.q_avg == doctest::Approx(0.32).epsilon(1e-9));
  CHECK(inv.q_inf.contains(inv.q_avg));
  CHECK(inv.dioph.kind == RationalityKind::rational);
}
