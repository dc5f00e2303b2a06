#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffcom/monomial.hpp"
#include "cliffcom/pauli.hpp"

namespace cliffcom::dense {

using cplx = std::complex<double>;

// Dimension guard for explicit matrices; COMMUTANT_DENSE_CAP or --dense-cap
// override the default of 4096.
int dense_cap();
void set_dense_cap(int cap);

struct DenseOperator {
  int dim = 0;
  std::vector<cplx> a;  // row-major
  int n = 0, k = 1, q = 2;

  DenseOperator() = default;
  DenseOperator(int dim_, int n_, int k_, int q_)
      : dim(dim_), a(size_t(dim_) * size_t(dim_), 0.0), n(n_), k(k_), q(q_) {}

  cplx &at(int i, int j) { return a[size_t(i) * dim + j]; }
  const cplx &at(int i, int j) const { return a[size_t(i) * dim + j]; }

  static DenseOperator identity(int dim, int n, int k, int q);

  DenseOperator mul(const DenseOperator &o) const;
  DenseOperator add(const DenseOperator &o) const;
  DenseOperator sub(const DenseOperator &o) const;
  DenseOperator scaled(cplx s) const;
  DenseOperator dagger() const;
  DenseOperator kron(const DenseOperator &o) const;
  cplx trace() const;
  double max_abs() const;
  double max_abs_diff(const DenseOperator &o) const;
  double hermiticity_defect() const;
  bool is_unitary(double tol) const;
  std::vector<cplx> apply(const std::vector<cplx> &v) const;
};

struct StateVector {
  int n = 0, q = 2;
  std::vector<cplx> amps;

  int dim() const { return int(amps.size()); }
  void normalize();
};

StateVector zero_state(int n, int q = 2);
StateVector t_state(int n);  // |T>^{(x) n}
StateVector random_state(int n, uint64_t seed, int q = 2);
DenseOperator projector(const StateVector &s, int k);  // (|s><s|)^{(x) k}

DenseOperator dense_pauli(const pauli::PauliString &p);
DenseOperator dense_pauli(const pauli::PauliTensor &t);

// Explicit matrix of a Pauli monomial on n qudits, built as the n-fold
// tensor power of the single-qudit realization.
DenseOperator dense_monomial(const mono::Monomial &m, int n);
DenseOperator dense_monomial_direct(const mono::Monomial &m, int n);  // tuple sum, cross-check

DenseOperator permutation_op(const std::vector<int> &perm, int n, int q);  // dim q^{n k}
DenseOperator sym_projector(int k, int n, int q);

// Clifford generators as n-qudit matrices (Hadamard/Fourier, phase,
// entangling), plus a symbolic form for fast k-fold conjugation.
std::vector<DenseOperator> clifford_generators(int n, int q);

struct GateSpec {
  enum class Kind { OneQudit, TwoQudit } kind = Kind::OneQudit;
  int a = 0, b = 0;            // qudit indices within a copy
  std::vector<cplx> u;         // q x q or q^2 x q^2
  std::string name;
};
std::vector<GateSpec> clifford_generator_specs(int n, int q);

// g^{(x)k} O g^{dag (x)k} for an operator on k copies of n qudits.
DenseOperator conjugate_kfold(const DenseOperator &o, const GateSpec &g, int n, int k, int q);

bool commutes_with_clifford(const DenseOperator &o, double tol);
double clifford_commutation_residual(const DenseOperator &o);

// Decode a dense matrix that is proportional to a Weyl operator.
struct DecodedPauli {
  pauli::PauliString p;
  cplx phase;
};
DecodedPauli dense_to_pauli(const DenseOperator &o, double tol = 1e-8);

// ---- exact Clifford twirling -------------------------------------------------

// Per-Pauli-tensor class data for all q^{2nk} Pauli tensors: the canonical
// class id (or -1 when the twirl vanishes) and the phi phase exponent.
struct ClassTable {
  int q = 2, n = 0, k = 0;
  uint64_t total = 0;
  std::vector<int32_t> class_id;   // indexed by Pauli tensor index
  std::vector<int8_t> phase_exp;   // phi(P) = tau^phase_exp
  std::vector<std::string> keys;   // class id -> canonical (V,G) key
  std::vector<uint64_t> sizes;     // class id -> |S_{[V,G]}|
  std::vector<uint64_t> reps;      // class id -> smallest member index
};
ClassTable build_class_table(int q, int n, int k, bool parallel = true);

DenseOperator exact_twirl(const DenseOperator &o);
DenseOperator exact_twirl(const DenseOperator &o, const ClassTable &table);
DenseOperator exact_twirl_serial(const DenseOperator &o);

// Weingarten form of the twirl: sum_{i,j} winv[i][j] tr(Omega_i^dag O) Omega_j,
// with winv the (pseudo-)inverse Gram matrix of the basis at d = q^n.
DenseOperator weingarten_twirl(const DenseOperator &o, const std::vector<mono::Monomial> &basis,
                               const std::vector<double> &winv);

// Dense basis element mho_I for the class containing the given rep index.
DenseOperator dense_mho(const ClassTable &table, int class_id);

// In-place out += coeff * W(t), including the tensor's own phase.
void accumulate_pauli(DenseOperator &out, const pauli::PauliTensor &t, cplx coeff);

// ---- Haar (unitary group) baseline ------------------------------------------

struct HaarGram {
  int k = 0;
  std::vector<std::vector<int>> perms;
  std::vector<double> gram;   // k! x k!, entries d^{|pi sigma|}
  std::vector<double> winv;   // pseudo-inverse
};
HaarGram haar_gram(int k, double d);

DenseOperator haar_twirl(const DenseOperator &o);

// Operator one-norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm_hermitian(const DenseOperator &o);

}  // namespace cliffcom::dense
