#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "weylband/errors.hpp"
#include "weylband/profile.hpp"
#include "weylband/quantum.hpp"
#include "weylband/tridiag.hpp"

using namespace weylband;

namespace {
const SurfaceProfile kSphere = make_profile("sphere", {});
const ObservableSpec kCos2 = make_observable("cos2s", {});

double worst_match(const std::vector<std::complex<double>>& vals, double h, int m,
                   double e_max) {
  // worst relative deviation from the exact sphere levels, skipping l = 0
  double worst = 0.0;
  for (const auto& z : vals) {
    if (z.real() > e_max || z.real() < 0.5 * h * h) continue;
    double l_est = std::round(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * z.real() / (h * h))));
    double exact = h * h * l_est * (l_est + 1.0);
    if (exact == 0.0) continue;
    worst = std::max(worst, std::abs(z.real() - exact) / exact);
  }
  return worst;
}
}  // namespace

TEST_CASE("mode discretization basics") {
  ModeOperator op = discretize_mode(kSphere, kCos2, 0.1, 0.0, 0, 512);
  CHECK(op.n == 512);
  CHECK(op.ds == doctest::Approx(std::numbers::pi / 512));
  // vanishing end fluxes: no coupling lost at the poles, weights positive
  for (double w : op.weight) CHECK(w > 0.0);
  ObservableSpec coupled = make_observable("theta_coupled", {{"eta", 0.1}});
  CHECK_THROWS_AS(discretize_mode(kSphere, coupled, 0.1, 0.1, 0, 512),
                  NonSeparableObservable);
  CHECK_THROWS_AS(discretize_mode(kSphere, kCos2, 0.1, 0.0, 0, 64), std::invalid_argument);
}

TEST_CASE("sphere oracle: unperturbed eigenvalues match h^2 l(l+1)") {
  double h = 0.1;
  for (int m : {0, 3, 7}) {
    ModeOperator op = discretize_mode(kSphere, kCos2, h, 0.0, m, 1024);
    auto vals = eigenvalues_mode(op, {});
    for (const auto& z : vals) CHECK(z.imag() == 0.0);
    if (m == 0) {
      // constant mode sits in the kernel exactly
      CHECK(std::abs(vals.front().real()) < 1e-12);
    }
    CHECK(worst_match(vals, h, m, 1.5) < 1e-3);
  }
}

TEST_CASE("second-order convergence under grid doubling") {
  double h = 0.1;
  int m = 5;
  // eigenvalue nearest the l = 10 level for three grids
  double exact = h * h * 10 * 11;
  std::map<int, double> err;
  for (int n : {512, 1024}) {
    ModeOperator op = discretize_mode(kSphere, kCos2, h, 0.0, m, n);
    auto vals = eigenvalues_mode(op, {});
    double best = 1e300;
    for (const auto& z : vals)
      if (std::abs(z.real() - exact) < std::abs(best - exact)) best = z.real();
    err[n] = std::abs(best - exact);
    CHECK(std::abs(best - exact) / exact < 1e-3);
  }
  double ratio = err[512] / err[1024];
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("perturbation moves eigenvalues into the field-of-values band") {
  double h = 0.1, eps = 0.05;
  ModeOperator op = discretize_mode(kSphere, kCos2, h, eps, 4, 512);
  auto vals = eigenvalues_mode(op, {});
  for (const auto& z : vals) {
    // Im z / eps lies in the pointwise range of q = cos^2 s
    CHECK(z.imag() >= -1e-10);
    CHECK(z.imag() <= eps * 1.0 + 1e-10);
  }
}

TEST_CASE("real parts are stable under the perturbation for matched indices") {
  double h = 0.1, eps = h;
  ModeOperator op0 = discretize_mode(kSphere, kCos2, h, 0.0, 3, 512);
  ModeOperator op1 = discretize_mode(kSphere, kCos2, h, eps, 3, 512);
  auto v0 = eigenvalues_mode(op0, {});
  auto v1 = eigenvalues_mode(op1, {});
  REQUIRE(v0.size() == v1.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (v0[i].real() > 2.0) break;
    CHECK(std::abs(v1[i].real() - v0[i].real()) <= 2.0 * (eps * eps + eps * h));
  }
}

TEST_CASE("assembled spectrum: counts, degeneracy, windows") {
  double h = 0.1;
  AssembleConfig cfg;
  cfg.grid_n = 512;
  Spectrum spec = assemble_spectrum(kSphere, kCos2, h, 0.0, 0.85, 1.15, cfg);
  // exact strip count: l(l+1) in [85, 115] -> l = 9, 10: 19 + 21 = 40;
  // edges sit away from the levels so discretization cannot flip the count
  long inside = 0;
  for (const auto& en : spec.entries)
    if (en.z.real() > 0.85 && en.z.real() < 1.15) ++inside;
  CHECK(inside == 40);
  // m and -m coincide entrywise
  std::map<int, std::vector<double>> by_m;
  for (const auto& en : spec.entries) by_m[en.m].push_back(en.z.real());
  for (const auto& [m, v] : by_m) {
    if (m <= 0) continue;
    REQUIRE(by_m.count(-m));
    REQUIRE(by_m.at(-m).size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      CHECK(v[i] == doctest::Approx(by_m.at(-m)[i]).epsilon(1e-12));
  }
  // empty window below the spectrum bottom of high modes
  Spectrum empty = assemble_spectrum(kSphere, kCos2, 0.5, 0.0, 0.0001, 0.0002, cfg);
  long found = 0;
  for (const auto& en : empty.entries)
    if (en.z.real() > 0.0001 && en.z.real() < 0.0002) ++found;
  CHECK(found == 0);
}

TEST_CASE("rectangle counting conventions") {
  Spectrum spec;
  spec.h = 0.1;
  spec.eps = 0.1;
  spec.entries = {{0, 0, {1.0, 0.03}, 128},
                  {0, 1, {1.05, 0.01}, 128},
                  {1, 0, {0.9, 0.03}, 128},     // on the Re boundary: excluded
                  {1, 1, {1.0, 0.02000000001}, 128}};  // near the Im boundary
  BandSpec band{0.9, 1.1, 0.2, 0.4, 0.1, 0.1, {}};
  RectangleCount rc = count_in_rectangle_detail(spec, band);
  CHECK(rc.inside == 2);  // 0.03/0.1 = 0.3 and 0.2000000001 inside; 0.01/0.1 = 0.1 below
  CHECK(rc.near_boundary == 2);
  BandSpec mismatched{0.9, 1.1, 0.2, 0.4, 0.2, 0.1, {}};
  CHECK_THROWS_AS(count_in_rectangle(spec, mismatched), std::invalid_argument);
}

TEST_CASE("imaginary parts follow the classical averages") {
  double h = 0.05, eps = std::sqrt(h);
  AssembleConfig cfg;
  cfg.grid_n = 1024;
  Spectrum spec = assemble_spectrum(kSphere, kCos2, h, eps, 0.9, 1.1, cfg);
  ImagResidualStats st = imag_correspondence(spec, kSphere, kCos2, 1e-9);
  CHECK(st.count > 50);
  CHECK(st.median < 0.05);
  CHECK(st.p90 < 0.15);
  Spectrum unperturbed;
  unperturbed.h = h;
  unperturbed.eps = 0.0;
  CHECK_THROWS_AS(imag_correspondence(unperturbed, kSphere, kCos2, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("damped wave: zero and constant damping closed forms") {
  DampedWaveConfig cfg;
  cfg.grid_n = 512;
  // zero damping: tau = +-sqrt(lambda), all real
  ObservableSpec zero = make_observable("bump", {{"beta", 0.0}, {"scale", 0.0}});
  DampedWaveProblem p0 = damped_wave_modes(kSphere, zero, 2, 512, 5.0, 12.0, cfg);
  REQUIRE(!p0.taus.empty());
  for (const auto& t : p0.taus) CHECK(std::abs(t.imag()) < 1e-10);

  // constant damping a0: tau = +-sqrt(lambda - a0^2) + i a0 exactly
  double a0 = 0.3;
  ObservableSpec constant = make_observable("bump", {{"beta", 0.0}, {"scale", a0}});
  DampedWaveProblem pc = damped_wave_modes(kSphere, constant, 2, 512, 5.0, 12.0, cfg);
  ModeOperator op = discretize_mode(kSphere, kCos2, 1.0, 0.0, 2, 512);
  auto lambdas = tridiag_eigenvalues(op.diag, op.offdiag);
  REQUIRE(!pc.taus.empty());
  for (const auto& t : pc.taus) {
    CHECK(t.imag() == doctest::Approx(a0).epsilon(1e-8));
    double best = 1e300;
    for (const auto& lam : lambdas) {
      double expect = std::sqrt(lam.real() - a0 * a0);
      best = std::min(best, std::abs(t.real() - expect));
    }
    CHECK(best < 1e-8);
  }
  CHECK_THROWS_AS(damped_wave_modes(kSphere, make_observable("bump", {{"beta", 0.0}, {"scale", -0.1}}),
                                    2, 512, 5.0, 12.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("damped wave: reflection symmetry and band confinement") {
  DampedWaveConfig cfg;
  cfg.grid_n = 512;
  cfg.basis_margin = 6.0;
  auto modes = damped_wave_spectrum(kSphere, kCos2, -14.0, 14.0, cfg);
  long total = 0;
  for (const auto& mode : modes) total += static_cast<long>(mode.taus.size());
  CHECK(total > 40);
  for (const auto& mode : modes) {
    for (const auto& t : mode.taus) {
      CHECK(t.imag() > -1e-8);
      // band confinement is asymptotic; low frequencies may poke above the
      // averaged range (the l = 1 expectation of cos^2 s is 0.6)
      CHECK(t.imag() < (std::abs(t.real()) >= 10.0 ? 0.52 : 0.65));
    }
    // tau -> -conj(tau) pairing within each mode
    for (const auto& t : mode.taus) {
      double best = 1e300;
      for (const auto& u : mode.taus) best = std::min(best, std::abs(u + std::conj(t)));
      CHECK(best < 1e-7);
    }
  }
  TauBox box{6.0, 9.0, 0.1, 0.45};
  TauBox mirror{-9.0, -6.0, 0.1, 0.45};
  long pos = count_eigenfrequencies(modes, box);
  long neg = count_eigenfrequencies(modes, mirror);
  CHECK(pos > 0);
  CHECK(pos == neg);
  TauBox above{6.0, 9.0, 0.7, 1.0};  // beyond the damping range: empty
  CHECK(count_eigenfrequencies(modes, above) == 0);
}
