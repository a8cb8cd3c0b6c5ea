#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "weylband/classical.hpp"
#include "weylband/profile.hpp"

namespace weylband {

// Counting rectangle (E2, E4) + i*eps*(F3, F1) with the semiclassical and
// perturbation parameters attached.
struct BandSpec {
  double e2 = 0.0, e4 = 0.0;  // real energies, e2 < e4
  double f3 = 0.0, f1 = 0.0;  // imaginary levels in units of eps, f3 < f1
  double eps = 0.0;
  double h = 0.0;
  std::optional<double> eps_exponent;  // regime record: eps = h^alpha

  void validate() const;
};

struct LevelCrossing {
  double a = 0.0;
  double slope = 0.0;  // d<q>/da at the crossing
  int level_index = 0; // 1 or 3
};

// Union of torus-parameter intervals whose accumulation sets sit inside the
// band, with the transversal boundary crossings.
struct AdmissibleSet {
  std::vector<Interval> intervals;
  std::vector<LevelCrossing> crossings;
  bool containment_checked = false;

  double measure() const;
  bool contains(double a) const;
};

struct WeylPrediction {
  double volume = 0.0;        // phase-space volume of the banded region
  double n_pred = 0.0;        // volume / (2 pi h)^2
  double strip_volume = 0.0;  // pi (E4 - E2) Area(M)
  double n_strip_pred = 0.0;
};

struct BSPoint {
  int k = 0;  // libration quantum number
  int m = 0;  // angular quantum number
  std::complex<double> z;
  double a = 0.0;
};

// Quasi-eigenvalue lattice of the translation-invariant normal form, solved
// in the global actions so no separate action offset remains.
struct BSLattice {
  std::vector<BSPoint> points;
  std::array<int, 2> maslov_k0{2, 0};  // (libration, rotation) cycles
  std::array<double, 2> action_offset{0.0, 0.0};
  long excluded_equatorial = 0;  // points dropped by the margin near |a| = apex
  double h = 0.0;
  double eps = 0.0;
};

struct AdmissibleConfig {
  int grid_n = 512;
  double transversality_tol = 1e-3;
  double quad_tol = 1e-10;
  double tangency_tol = 1e-8;      // how close an extremum may sit to a level
  double singular_leaf_tol = 1e-9; // level vs singular-leaf average
  QInfinityConfig qinf;
};

// A = closure of { a : Q_inf(Lambda_a) inside [F3, F1] }. Throws
// TangentCrossing when a level grazes the average without crossing, and
// LevelHitsSingularLeaf when a level meets the accumulation set of the
// equatorial leaves, the meridian family, or a rational band.
AdmissibleSet admissible_set(const SurfaceProfile& profile, const ObservableSpec& obs,
                             double f3, double f1, const AdmissibleConfig& cfg);

// 2 pi (E4 - E2) Int_A J(1, a) da: the Liouville volume of the banded region
// between the energy shells, reduced to the torus parameter.
double band_volume(const SurfaceProfile& profile, const AdmissibleSet& A, double e2,
                   double e4, double quad_tol);

double weyl_count_prediction(double volume, double h);

// pi (E2 - E1) Area(M) / (2 pi h)^2: the plain strip count.
double strip_prediction(const SurfaceProfile& profile, double e1, double e2, double h);

WeylPrediction make_prediction(const SurfaceProfile& profile, const AdmissibleSet& A,
                               const BandSpec& band, double quad_tol);

// Quasi-eigenvalues z = E + i eps <q>(Lambda_a) at sqrt(E) iota(a) = h (k + 1/2),
// a sqrt(E) = h m, for E in the window. Points with |a| beyond
// (1 - a_margin) * apex are excluded and counted.
BSLattice bohr_sommerfeld_spectrum(const SurfaceProfile& profile, const ObservableSpec& obs,
                                   double h, double eps, double e_lo, double e_hi,
                                   double a_margin, double quad_tol);

struct RectangleCount {
  long inside = 0;
  long near_boundary = 0;  // within 1e-8 of an edge, reported separately
};

RectangleCount count_lattice_detail(const BSLattice& lattice, const BandSpec& band);
long count_lattice(const BSLattice& lattice, const BandSpec& band);

// Energy-partitioned variant supporting E-dependent levels: re-derives the
// admissible set per subinterval and sums. For observables depending on s
// only the averages are energy-independent and this reduces to band_volume.
double band_volume_isoenergetic(const SurfaceProfile& profile, const ObservableSpec& obs,
                                double f3, double f1, double e2, double e4,
                                int subintervals, const AdmissibleConfig& cfg);

}  // namespace weylband
