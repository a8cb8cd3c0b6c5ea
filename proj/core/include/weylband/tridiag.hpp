#pragma once

#include <complex>
#include <vector>

namespace weylband {

using cdouble = std::complex<double>;

// Eigenvalues of a complex symmetric tridiagonal matrix (diag d, off-diagonal
// e, e.size() == d.size() - 1) by the implicit-shift QL iteration with
// complex orthogonal rotations and deflation, the complex-symmetric analog of
// the classic IMTQL1. Output is sorted by real part. Throws
// ConvergenceFailure if an eigenvalue fails to deflate within the iteration
// cap or a rotation becomes isotropic.
std::vector<cdouble> tridiag_eigenvalues(std::vector<cdouble> d, std::vector<cdouble> e,
                                         int max_iter = 80);

// One inverse-iteration eigenvector for the shift z (two passes from a fixed
// deterministic start), normalized to unit 2-norm.
std::vector<cdouble> tridiag_inverse_iteration(const std::vector<cdouble>& d,
                                               const std::vector<cdouble>& e, cdouble z);

// ||(A - z I) v|| / (||A||_inf ||v||) for the tridiagonal A.
double tridiag_residual(const std::vector<cdouble>& d, const std::vector<cdouble>& e,
                        cdouble z, const std::vector<cdouble>& v);

}  // namespace weylband
