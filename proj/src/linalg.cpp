#include "cliffcom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cliffcom::linalg {

HermitianEigen eig_hermitian(std::vector<cplx> a, int n) {
  HermitianEigen out;
  out.n = n;
  out.vecs.assign(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) out.vecs[size_t(i) * n + i] = 1.0;
  auto A = [&](int i, int j) -> cplx & { return a[size_t(i) * n + j]; };
  auto V = [&](int i, int j) -> cplx & { return out.vecs[size_t(i) * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += std::norm(A(i, j));
    if (off < 1e-28 * std::max(1, n)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx apq = A(p, q);
        double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        cplx phase = apq / mag;  // a_pq = mag * phase
        double app = A(p, p).real(), aqq = A(q, q).real();
        double tau = (aqq - app) / (2.0 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        // columns p, q mix with the phase absorbed into column q
        for (int i = 0; i < n; ++i) {
          cplx aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * (std::conj(phase) * aiq);
          A(i, q) = s * (phase * aip) + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          cplx api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * (phase * aqi);
          A(q, i) = s * (std::conj(phase) * api) + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          cplx vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * (std::conj(phase) * viq);
          V(i, q) = s * (phase * vip) + c * viq;
        }
      }
    }
  }
  out.vals.resize(size_t(n));
  for (int i = 0; i < n; ++i) out.vals[size_t(i)] = A(i, i).real();
  return out;
}

SymmetricEigen eig_symmetric(const std::vector<double> &a, int n) {
  std::vector<cplx> ac(a.begin(), a.end());
  HermitianEigen h = eig_hermitian(std::move(ac), n);
  SymmetricEigen out;
  out.n = n;
  out.vals = h.vals;
  out.vecs.resize(size_t(n) * n);
  for (size_t i = 0; i < out.vecs.size(); ++i) out.vecs[i] = h.vecs[i].real();
  return out;
}

SymmetricPinv pinv_symmetric(const std::vector<double> &a, int n, double rel_tol) {
  SymmetricEigen e = eig_symmetric(a, n);
  double lmax = 0;
  for (double v : e.vals) lmax = std::max(lmax, std::abs(v));
  SymmetricPinv out;
  out.pinv.assign(size_t(n) * n, 0.0);
  double lmin_kept = lmax;
  for (int l = 0; l < n; ++l) {
    double lam = e.vals[size_t(l)];
    if (std::abs(lam) <= rel_tol * lmax) continue;
    ++out.rank;
    lmin_kept = std::min(lmin_kept, std::abs(lam));
    double inv = 1.0 / lam;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.pinv[size_t(i) * n + j] += inv * e.vecs[size_t(i) * n + l] * e.vecs[size_t(j) * n + l];
  }
  out.cond = lmin_kept > 0 ? lmax / lmin_kept : 0.0;
  return out;
}

std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[size_t(r) * n + col]) > std::abs(a[size_t(piv) * n + col])) piv = r;
    if (std::abs(a[size_t(piv) * n + col]) < 1e-300) throw std::runtime_error("solve_real: singular system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a[size_t(col) * n + j], a[size_t(piv) * n + j]);
      std::swap(b[size_t(col)], b[size_t(piv)]);
    }
    double d = a[size_t(col) * n + col];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[size_t(r) * n + col] / d;
      if (f == 0) continue;
      for (int j = col; j < n; ++j) a[size_t(r) * n + j] -= f * a[size_t(col) * n + j];
      b[size_t(r)] -= f * b[size_t(col)];
    }
  }
  std::vector<double> x(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) x[size_t(i)] = b[size_t(i)] / a[size_t(i) * n + i];
  return x;
}

int rank_from_gram(const std::vector<cplx> &gram, int n, double tol) {
  HermitianEigen e = eig_hermitian(gram, n);
  double lmax = 0;
  for (double v : e.vals) lmax = std::max(lmax, v);
  if (lmax <= 0) return 0;
  double smax = std::sqrt(lmax);
  int r = 0;
  for (double v : e.vals)
    if (v > 0 && std::sqrt(v) > tol * std::max(1.0, smax)) ++r;
  return r;
}

}  // namespace cliffcom::linalg
