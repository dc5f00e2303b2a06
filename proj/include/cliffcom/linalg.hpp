#pragma once

#include <complex>
#include <vector>

namespace cliffcom::linalg {

using cplx = std::complex<double>;

// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
// a is row-major n x n; on return vals holds the eigenvalues and vecs the
// eigenvectors as columns (a = V diag(vals) V^dag).
struct HermitianEigen {
  std::vector<double> vals;
  std::vector<cplx> vecs;  // row-major n x n, column j = eigenvector j
  int n = 0;
};
HermitianEigen eig_hermitian(std::vector<cplx> a, int n);

struct SymmetricEigen {
  std::vector<double> vals;
  std::vector<double> vecs;  // row-major, column j = eigenvector j
  int n = 0;
};
SymmetricEigen eig_symmetric(const std::vector<double> &a, int n);

// Moore-Penrose pseudo-inverse of a real symmetric matrix; eigenvalues with
// |lambda| <= rel_tol * max|lambda| are treated as zero.
struct SymmetricPinv {
  std::vector<double> pinv;
  int rank = 0;
  double cond = 0.0;  // |largest| / |smallest kept|
};
SymmetricPinv pinv_symmetric(const std::vector<double> &a, int n, double rel_tol = 1e-12);

// Solve a x = b in place by partial-pivot elimination (small systems).
std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, int n);

// Number of eigenvalues of the PSD Gram matrix whose square roots (singular
// values of the row set) exceed tol * largest.
int rank_from_gram(const std::vector<cplx> &gram, int n, double tol);

}  // namespace cliffcom::linalg
