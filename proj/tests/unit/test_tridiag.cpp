#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "weylband/tridiag.hpp"

using namespace weylband;

namespace {

// dense oracle for complex symmetric tridiagonals
std::vector<cdouble> dense_eigenvalues(const std::vector<cdouble>& d,
                                       const std::vector<cdouble>& e) {
  int n = static_cast<int>(d.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = d[i];
  for (int i = 0; i + 1 < n; ++i) {
    A(i, i + 1) = e[i];
    A(i + 1, i) = e[i];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  std::vector<cdouble> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

double max_abs(const std::vector<cdouble>& d, const std::vector<cdouble>& e) {
  double m = 0.0;
  for (auto z : d) m = std::max(m, std::abs(z));
  for (auto z : e) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_CASE("real symmetric tridiagonal matches the dense oracle") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 60;
  std::vector<cdouble> d(n), e(n - 1);
  for (auto& x : d) x = uni(rng);
  for (auto& x : e) x = uni(rng);
  auto mine = tridiag_eigenvalues(d, e);
  auto oracle = dense_eigenvalues(d, e);
  double scale = max_abs(d, e);
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(mine[i] - oracle[i]) < 1e-11 * scale);
    CHECK(mine[i].imag() == 0.0);  // real input stays exactly real
  }
}

TEST_CASE("complex symmetric tridiagonal matches the dense oracle") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 48;
  for (double im_scale : {0.05, 0.3}) {
    std::vector<cdouble> d(n), e(n - 1);
    for (auto& x : d) x = cdouble(uni(rng), im_scale * uni(rng));
    for (auto& x : e) x = cdouble(uni(rng), 0.0);
    auto mine = tridiag_eigenvalues(d, e);
    auto oracle = dense_eigenvalues(d, e);
    double scale = max_abs(d, e);
    for (int i = 0; i < n; ++i) CHECK(std::abs(mine[i] - oracle[i]) < 1e-9 * scale);
  }
}

TEST_CASE("inverse iteration produces small residuals") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 200;
  std::vector<cdouble> d(n), e(n - 1);
  for (auto& x : d) x = cdouble(uni(rng), 0.1 * uni(rng));
  for (auto& x : e) x = uni(rng);
  auto vals = tridiag_eigenvalues(d, e);
  for (int k : {0, n / 3, n / 2, n - 1}) {
    auto v = tridiag_inverse_iteration(d, e, vals[k]);
    CHECK(tridiag_residual(d, e, vals[k], v) < 1e-12);
  }
}
