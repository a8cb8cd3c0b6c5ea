#pragma once

#include <complex>
#include <vector>

#include "weylband/profile.hpp"
#include "weylband/weylvol.hpp"

namespace weylband {

// One angular-momentum block of P_eps = -h^2 Laplace + i eps q on the
// surface of revolution, discretized in weighted divergence form on a
// cell-centered grid. The fluxes at both ends vanish because the radius
// does, so no boundary condition is imposed explicitly.
struct ModeOperator {
  int m = 0;
  int n = 0;
  double ds = 0.0;
  std::vector<std::complex<double>> diag;     // symmetrized diagonal
  std::vector<std::complex<double>> offdiag;  // symmetrized couplings, size n-1
  std::vector<double> weight;                 // cell areas f_i ds
  double h = 0.0;
  double eps = 0.0;
};

struct SpectrumEntry {
  int m = 0;
  int index = 0;  // position within the mode, sorted by Re z
  std::complex<double> z;
  int grid_n = 0;
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;
  double h = 0.0;
  double eps = 0.0;
};

struct EigensolveConfig {
  // residual gate for sampled eigenpairs, as a multiple of n * unit roundoff
  double backward_error_multiple = 200.0;
  int max_iterations = 80;
  double deflation_tol = 0.0;  // 0: machine-epsilon deflation
  int residual_samples = 8;
};

struct ImagResidualStats {
  double median = 0.0;
  double p90 = 0.0;
  long count = 0;
};

struct DampedWaveProblem {
  ObservableSpec damping;
  int m = 0;
  int linearized_dim = 0;  // 2x the modal basis actually linearized
  std::vector<std::complex<double>> taus;
};

ModeOperator discretize_mode(const SurfaceProfile& profile, const ObservableSpec& obs,
                             double h, double eps, int m, int n);

// All n eigenvalues of the mode block, sorted by real part. Residuals of a
// few inverse-iteration eigenpairs are checked against the backward-error
// gate; a real path (eps = 0) keeps the spectrum exactly real.
std::vector<std::complex<double>> eigenvalues_mode(const ModeOperator& op,
                                                   const EigensolveConfig& cfg);

struct AssembleConfig {
  int grid_n = 2048;
  int m_buffer = 3;
  double guard_margin_in_h = 4.0;  // keep Re z within window +- margin * h
  EigensolveConfig eig;
};

Spectrum assemble_spectrum(const SurfaceProfile& profile, const ObservableSpec& obs,
                           double h, double eps, double e_lo, double e_hi,
                           const AssembleConfig& cfg);

RectangleCount count_in_rectangle_detail(const Spectrum& spectrum, const BandSpec& band);
long count_in_rectangle(const Spectrum& spectrum, const BandSpec& band);

// median and 90th percentile of |Im z / eps - <q>(Lambda_a)| over eigenvalues
// with |a| = |h m| / sqrt(Re z) below 0.9 of the apex radius.
ImagResidualStats imag_correspondence(const Spectrum& spectrum, const SurfaceProfile& profile,
                                      const ObservableSpec& obs, double quad_tol);

struct DampedWaveConfig {
  int grid_n = 2048;
  double basis_margin = 8.0;  // widen the modal window by this much in Re tau
  EigensolveConfig eig;
};

// Eigenfrequencies of the stationary damped wave problem
// tau^2 v - 2 i tau a(s) v - L_m v = 0 at h = 1, windowed in Re tau.
// The quadratic problem is companion-linearized on the modal basis of L_m
// restricted to the padded frequency window.
DampedWaveProblem damped_wave_modes(const SurfaceProfile& profile,
                                    const ObservableSpec& damping, int m, int n,
                                    double tau_lo, double tau_hi,
                                    const DampedWaveConfig& cfg);

// Union over |m| <= ceil(tau_hi * apex) + buffer, with +-m degeneracy.
std::vector<DampedWaveProblem> damped_wave_spectrum(const SurfaceProfile& profile,
                                                    const ObservableSpec& damping,
                                                    double tau_lo, double tau_hi,
                                                    const DampedWaveConfig& cfg);

struct TauBox {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
};

RectangleCount count_eigenfrequencies_detail(const std::vector<DampedWaveProblem>& modes,
                                             const TauBox& box);
long count_eigenfrequencies(const std::vector<DampedWaveProblem>& modes, const TauBox& box);

}  // namespace weylband
