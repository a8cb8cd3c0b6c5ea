#include "weylband/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "weylband/errors.hpp"

namespace weylband {

namespace {

double cabs1(cdouble z) { return std::abs(z.real()) + std::abs(z.imag()); }

// branch of sqrt(g^2 + 1) on the same side as g, avoiding cancellation in
// the Wilkinson-shift denominator g + r
cdouble aligned_root(cdouble g) {
  cdouble r = std::sqrt(g * g + 1.0);
  if (g.real() * r.real() + g.imag() * r.imag() < 0.0) r = -r;
  return r;
}

}  // namespace

std::vector<cdouble> tridiag_eigenvalues(std::vector<cdouble> d, std::vector<cdouble> e,
                                         int max_iter) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (e.size() + 1 != n)
    throw std::invalid_argument("tridiag_eigenvalues: e must have size n - 1");
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      // look for a negligible off-diagonal element
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        double tst = cabs1(d[m]) + cabs1(d[m + 1]);
        if (cabs1(e[m]) <= eps * tst) break;
      }
      if (m == l) break;
      if (++iter > max_iter)
        throw ConvergenceFailure("tridiagonal QL: eigenvalue " + std::to_string(l) +
                                 " did not deflate");
      // Wilkinson-style shift from the leading 2x2 block
      cdouble p = d[l];
      cdouble g = (d[l + 1] - p) / (2.0 * e[l]);
      g = d[m] - p + e[l] / (g + aligned_root(g));

      cdouble s = 1.0, c = 1.0;
      p = 0.0;
      for (std::size_t ii = m; ii-- > l;) {
        cdouble f = s * e[ii];
        cdouble b = c * e[ii];
        cdouble r = std::sqrt(f * f + g * g);
        e[ii + 1] = r;
        if (r == cdouble(0.0)) {
          if (f == cdouble(0.0) && g == cdouble(0.0)) {
            // recover from underflow as in the real algorithm
            d[ii + 1] -= p;
            e[m] = 0.0;
            break;
          }
          // f^2 + g^2 = 0 with f, g nonzero: complex orthogonal reduction broke down
          throw ConvergenceFailure("tridiagonal QL: isotropic rotation encountered");
        }
        if (cabs1(r) < eps * (cabs1(f) + cabs1(g)))
          throw ConvergenceFailure("tridiagonal QL: near-isotropic rotation, growth too large");
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;
        if (ii == l) {
          d[l] -= p;
          e[l] = g;
          e[m] = 0.0;
        }
      }
    }
  }

  std::sort(d.begin(), d.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return d;
}

namespace {

// partial-pivot LU solve of (T - z I) x = b for tridiagonal T; the factor has
// two superdiagonals after row swaps
void shifted_solve(const std::vector<cdouble>& d, const std::vector<cdouble>& e, cdouble z,
                   std::vector<cdouble>& x) {
  const std::size_t n = d.size();
  std::vector<cdouble> diag(n), sup1(n, 0.0), sup2(n, 0.0), sub(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d[i] - z;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sup1[i] = e[i];
    sub[i] = e[i];
  }
  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i]) > std::abs(diag[i])) {
      std::swap(diag[i], sub[i]);          // row i <-> i+1, column i entries
      std::swap(sup1[i], diag[i + 1]);     // column i+1
      std::swap(sup2[i], sup1[i + 1]);     // column i+2
      std::swap(x[i], x[i + 1]);
    }
    if (std::abs(diag[i]) < tiny) diag[i] = tiny;
    cdouble mult = sub[i] / diag[i];
    diag[i + 1] -= mult * sup1[i];
    sup1[i + 1] -= mult * sup2[i];
    x[i + 1] -= mult * x[i];
  }
  if (std::abs(diag[n - 1]) < tiny) diag[n - 1] = tiny;
  // back substitution
  for (std::size_t i = n; i-- > 0;) {
    cdouble acc = x[i];
    if (i + 1 < n) acc -= sup1[i] * x[i + 1];
    if (i + 2 < n) acc -= sup2[i] * x[i + 2];
    x[i] = acc / diag[i];
  }
}

double norm2(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (cdouble z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

std::vector<cdouble> tridiag_inverse_iteration(const std::vector<cdouble>& d,
                                               const std::vector<cdouble>& e, cdouble z) {
  const std::size_t n = d.size();
  std::vector<cdouble> v(n);
  // fixed pseudo-random start keeps results deterministic
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = cdouble(1.0 + (state >> 40) * 0x1p-24, 0.5 - (state >> 16 & 0xffffff) * 0x1p-24);
  }
  for (int pass = 0; pass < 2; ++pass) {
    shifted_solve(d, e, z, v);
    double nv = norm2(v);
    if (nv == 0.0) break;
    for (auto& x : v) x /= nv;
  }
  return v;
}

double tridiag_residual(const std::vector<cdouble>& d, const std::vector<cdouble>& e,
                        cdouble z, const std::vector<cdouble>& v) {
  const std::size_t n = d.size();
  double norm_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(d[i]);
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < n) row += std::abs(e[i]);
    norm_a = std::max(norm_a, row);
  }
  std::vector<cdouble> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    cdouble acc = (d[i] - z) * v[i];
    if (i > 0) acc += e[i - 1] * v[i - 1];
    if (i + 1 < n) acc += e[i] * v[i + 1];
    r[i] = acc;
  }
  double nv = norm2(v);
  return nv > 0 ? norm2(r) / (std::max(norm_a, 1e-300) * nv) : 0.0;
}

}  // namespace weylband
