#include "weylband/quantum.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "weylband/classical.hpp"
#include "weylband/errors.hpp"
#include "weylband/parallel.hpp"
#include "weylband/tridiag.hpp"

namespace weylband {

namespace {

constexpr double kBoundaryProximity = 1e-8;

using cvec = std::vector<std::complex<double>>;

void check_residuals(const ModeOperator& op, const cvec& eigenvalues,
                     const EigensolveConfig& cfg) {
  if (cfg.residual_samples <= 0 || eigenvalues.empty()) return;
  double bound = cfg.backward_error_multiple * op.n *
                 std::numeric_limits<double>::epsilon();
  int samples = std::min<int>(cfg.residual_samples, eigenvalues.size());
  for (int s = 0; s < samples; ++s) {
    std::size_t idx = eigenvalues.size() * (2 * s + 1) / (2 * samples);
    cdouble z = eigenvalues[idx];
    auto v = tridiag_inverse_iteration(op.diag, op.offdiag, z);
    double res = tridiag_residual(op.diag, op.offdiag, z, v);
    if (res > bound) {
      throw ConvergenceFailure("eigenpair residual " + std::to_string(res) +
                               " exceeds the backward-error gate " + std::to_string(bound) +
                               " (mode m = " + std::to_string(op.m) + ")");
    }
  }
}

}  // namespace

ModeOperator discretize_mode(const SurfaceProfile& profile, const ObservableSpec& obs,
                             double h, double eps, int m, int n) {
  if (n < 128) throw std::invalid_argument("discretize_mode: n >= 128 required");
  if (!(h > 0.0)) throw std::invalid_argument("discretize_mode: h > 0 required");
  if (obs.depends_on_theta && eps != 0.0)
    throw NonSeparableObservable(
        "mode discretization needs an observable depending on s only");
  ModeOperator op;
  op.m = m;
  op.n = n;
  op.h = h;
  op.eps = eps;
  op.ds = profile.length / n;
  op.diag.resize(n);
  op.offdiag.resize(n - 1);
  op.weight.resize(n);
  const double ds = op.ds;
  const double h2 = h * h;
  std::vector<double> f_cell(n), f_half(n + 1);
  for (int i = 0; i < n; ++i) f_cell[i] = profile.f((i + 0.5) * ds);
  for (int i = 0; i <= n; ++i) f_half[i] = profile.f(i * ds);
  f_half[0] = 0.0;  // exact pole radii, keeping the end fluxes identically zero
  f_half[n] = 0.0;
  for (int i = 0; i < n; ++i) {
    double fi = f_cell[i];
    double diag_flux = h2 * (f_half[i + 1] + f_half[i]) / (fi * ds * ds);
    double centrifugal = h2 * m * m / (fi * fi);
    double q = eps != 0.0 ? eval_observable(obs, (i + 0.5) * ds, 0.0) : 0.0;
    op.diag[i] = {diag_flux + centrifugal, eps * q};
    op.weight[i] = fi * ds;
  }
  for (int i = 0; i + 1 < n; ++i) {
    op.offdiag[i] = -h2 * f_half[i + 1] / (ds * ds * std::sqrt(f_cell[i] * f_cell[i + 1]));
  }
  return op;
}

std::vector<std::complex<double>> eigenvalues_mode(const ModeOperator& op,
                                                   const EigensolveConfig& cfg) {
  cvec vals = tridiag_eigenvalues(op.diag, op.offdiag, cfg.max_iterations);
  if (op.eps == 0.0) {
    // a real symmetric block stays exactly real through the QL recurrences
    for (auto& z : vals) z = {z.real(), 0.0};
  }
  check_residuals(op, vals, cfg);
  return vals;
}

Spectrum assemble_spectrum(const SurfaceProfile& profile, const ObservableSpec& obs,
                           double h, double eps, double e_lo, double e_hi,
                           const AssembleConfig& cfg) {
  if (!(e_lo < e_hi)) throw std::invalid_argument("assemble_spectrum: E_lo < E_hi");
  Spectrum spec;
  spec.h = h;
  spec.eps = eps;
  const double fmax = profile.apex_radius;
  const int m_cap = static_cast<int>(std::ceil(std::sqrt(e_hi) * fmax / h)) + cfg.m_buffer;
  const double re_lo = e_lo - cfg.guard_margin_in_h * h;
  const double re_hi = e_hi + cfg.guard_margin_in_h * h;

  // grid maximum of the radius, for the far-above-window mode guard
  double f_grid_max = 0.0;
  for (int i = 0; i < cfg.grid_n; ++i)
    f_grid_max = std::max(f_grid_max, profile.f((i + 0.5) * profile.length / cfg.grid_n));

  std::vector<cvec> per_mode(m_cap + 1);
  parallel_for(static_cast<std::size_t>(m_cap + 1), [&](std::size_t mi) {
    int m = static_cast<int>(mi);
    double floor_potential = h * h * m * m / (f_grid_max * f_grid_max);
    if (floor_potential > 1e8 * e_hi) return;  // eigenvalues far above the window
    ModeOperator op = discretize_mode(profile, obs, h, eps, m, cfg.grid_n);
    cvec vals = eigenvalues_mode(op, cfg.eig);
    cvec kept;
    for (const auto& z : vals)
      if (z.real() >= re_lo && z.real() <= re_hi) kept.push_back(z);
    per_mode[mi] = std::move(kept);
  });

  for (int m = -m_cap; m <= m_cap; ++m) {
    const cvec& vals = per_mode[std::abs(m)];
    int idx = 0;
    for (const auto& z : vals) spec.entries.push_back({m, idx++, z, cfg.grid_n});
  }
  return spec;
}

namespace {

RectangleCount count_re_im(const std::vector<std::pair<double, double>>& pts,
                           const BandSpec& band) {
  RectangleCount rc;
  for (const auto& [re, im_over_eps] : pts) {
    if (re > band.e2 && re < band.e4 && im_over_eps > band.f3 && im_over_eps < band.f1)
      ++rc.inside;
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

RectangleCount count_in_rectangle_detail(const Spectrum& spectrum, const BandSpec& band) {
  band.validate();
  if (spectrum.h != band.h || spectrum.eps != band.eps)
    throw std::invalid_argument("count_in_rectangle: spectrum and band disagree on (h, eps)");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(spectrum.entries.size());
  for (const auto& en : spectrum.entries) {
    double im_over_eps = spectrum.eps > 0 ? en.z.imag() / spectrum.eps : 0.0;
    pts.emplace_back(en.z.real(), im_over_eps);
  }
  return count_re_im(pts, band);
}

long count_in_rectangle(const Spectrum& spectrum, const BandSpec& band) {
  return count_in_rectangle_detail(spectrum, band).inside;
}

ImagResidualStats imag_correspondence(const Spectrum& spectrum, const SurfaceProfile& profile,
                                      const ObservableSpec& obs, double quad_tol) {
  if (!(spectrum.eps > 0.0))
    throw std::invalid_argument("imag_correspondence: eps > 0 required");
  const double a_cut = 0.9 * profile.apex_radius;
  std::vector<const SpectrumEntry*> sel;
  for (const auto& en : spectrum.entries) {
    if (en.z.real() <= 0.0) continue;
    double a = std::abs(spectrum.h * en.m) / std::sqrt(en.z.real());
    if (a <= a_cut) sel.push_back(&en);
  }
  std::vector<double> residuals(sel.size());
  parallel_for(sel.size(), [&](std::size_t i) {
    const SpectrumEntry& en = *sel[i];
    double a = spectrum.h * en.m / std::sqrt(en.z.real());
    double q_avg = torus_average(profile, obs, a, quad_tol);
    residuals[i] = std::abs(en.z.imag() / spectrum.eps - q_avg);
  });
  ImagResidualStats st;
  st.count = static_cast<long>(residuals.size());
  if (residuals.empty()) return st;
  std::sort(residuals.begin(), residuals.end());
  st.median = residuals[residuals.size() / 2];
  st.p90 = residuals[static_cast<std::size_t>(0.9 * (residuals.size() - 1))];
  return st;
}

DampedWaveProblem damped_wave_modes(const SurfaceProfile& profile,
                                    const ObservableSpec& damping, int m, int n,
                                    double tau_lo, double tau_hi,
                                    const DampedWaveConfig& cfg) {
  if (damping.depends_on_theta)
    throw NonSeparableObservable("damped wave needs a damping depending on s only");
  if (!(tau_lo < tau_hi))
    throw std::invalid_argument("damped_wave_modes: need tau_lo < tau_hi");
  DampedWaveProblem prob;
  prob.damping = damping;
  prob.m = m;

  // unperturbed mode operator at h = 1; the damping enters only through the
  // tau-coupling, never as an i*eps*q term
  ModeOperator op = discretize_mode(profile, damping, 1.0, 0.0, m, n);
  for (int i = 0; i < n; ++i) {
    double a_i = eval_observable(damping, (i + 0.5) * op.ds, 0.0);
    if (a_i < -1e-12)
      throw std::invalid_argument("damped_wave_modes: damping must be nonnegative");
  }

  // modal window covering |Re tau| over the requested band, padded
  double abs_hi = std::max(std::abs(tau_lo), std::abs(tau_hi));
  double abs_lo = (tau_lo <= 0.0 && tau_hi >= 0.0)
                      ? 0.0
                      : std::min(std::abs(tau_lo), std::abs(tau_hi));
  double lam_lo = std::max(0.0, abs_lo - cfg.basis_margin);
  lam_lo *= lam_lo;
  double lam_hi = (abs_hi + cfg.basis_margin) * (abs_hi + cfg.basis_margin);

  cvec vals = tridiag_eigenvalues(op.diag, op.offdiag, cfg.eig.max_iterations);
  std::vector<double> lambdas;
  for (const auto& z : vals)
    if (z.real() >= lam_lo && z.real() <= lam_hi) lambdas.push_back(z.real());
  if (lambdas.empty()) return prob;

  const int k = static_cast<int>(lambdas.size());
  prob.linearized_dim = 2 * k;

  // modal basis by inverse iteration, orthonormalized for safety
  Eigen::MatrixXd basis(n, k);
  for (int j = 0; j < k; ++j) {
    auto v = tridiag_inverse_iteration(op.diag, op.offdiag, lambdas[j]);
    for (int i = 0; i < n; ++i) basis(i, j) = v[i].real();
    for (int prev = 0; prev < j; ++prev) {
      double dot = basis.col(prev).dot(basis.col(j));
      basis.col(j) -= dot * basis.col(prev);
    }
    double nv = basis.col(j).norm();
    if (nv <= 0.0) throw ConvergenceFailure("damped wave: modal basis degenerated");
    basis.col(j) /= nv;
  }

  // damping matrix in symmetrized coordinates is plain multiplication by a(s)
  Eigen::VectorXd a_diag(n);
  for (int i = 0; i < n; ++i) a_diag(i) = eval_observable(damping, (i + 0.5) * op.ds, 0.0);
  Eigen::MatrixXd a_modal = basis.transpose() * a_diag.asDiagonal() * basis;

  // companion form of tau^2 y = Lambda y + 2 i tau A y
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    comp(j, k + j) = 1.0;
    comp(k + j, j) = lambdas[j];
  }
  comp.block(k, k, k, k) = std::complex<double>(0.0, 2.0) * a_modal;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("damped wave: companion eigensolve failed (m = " +
                             std::to_string(m) + ")");
  for (int j = 0; j < 2 * k; ++j) {
    std::complex<double> tau = solver.eigenvalues()(j);
    if (tau.real() >= tau_lo && tau.real() <= tau_hi) prob.taus.push_back(tau);
  }
  std::sort(prob.taus.begin(), prob.taus.end(),
            [](std::complex<double> a, std::complex<double> b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
  return prob;
}

std::vector<DampedWaveProblem> damped_wave_spectrum(const SurfaceProfile& profile,
                                                    const ObservableSpec& damping,
                                                    double tau_lo, double tau_hi,
                                                    const DampedWaveConfig& cfg) {
  const double fmax = profile.apex_radius;
  const double abs_hi = std::max(std::abs(tau_lo), std::abs(tau_hi));
  const int m_cap = static_cast<int>(std::ceil((abs_hi + cfg.basis_margin) * fmax)) + 2;
  std::vector<DampedWaveProblem> out(2 * m_cap + 1);
  parallel_for(static_cast<std::size_t>(m_cap + 1), [&](std::size_t mi) {
    int m = static_cast<int>(mi);
    double lam_min = m * m / (fmax * fmax);
    double lam_hi = (abs_hi + cfg.basis_margin) * (abs_hi + cfg.basis_margin);
    if (lam_min > lam_hi) {
      out[m_cap + m].m = m;
      if (m != 0) out[m_cap - m].m = -m;
      return;
    }
    DampedWaveProblem prob =
        damped_wave_modes(profile, damping, m, cfg.grid_n, tau_lo, tau_hi, cfg);
    out[m_cap + m] = prob;
    if (m != 0) {
      prob.m = -m;
      out[m_cap - m] = std::move(prob);
    }
  });
  return out;
}

RectangleCount count_eigenfrequencies_detail(const std::vector<DampedWaveProblem>& modes,
                                             const TauBox& box) {
  RectangleCount rc;
  for (const auto& mode : modes) {
    for (const auto& tau : mode.taus) {
      if (tau.real() > box.re_lo && tau.real() < box.re_hi && tau.imag() > box.im_lo &&
          tau.imag() < box.im_hi)
        ++rc.inside;
      bool near_re = std::abs(tau.real() - box.re_lo) <= kBoundaryProximity ||
                     std::abs(tau.real() - box.re_hi) <= kBoundaryProximity;
      bool near_im = std::abs(tau.imag() - box.im_lo) <= kBoundaryProximity ||
                     std::abs(tau.imag() - box.im_hi) <= kBoundaryProximity;
      if (near_re || near_im) ++rc.near_boundary;
    }
  }
  return rc;
}

long count_eigenfrequencies(const std::vector<DampedWaveProblem>& modes, const TauBox& box) {
  return count_eigenfrequencies_detail(modes, box).inside;
}

}  // namespace weylband
