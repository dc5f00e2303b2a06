#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cliffcom/fmatrix.hpp"

namespace cliffcom::pauli {

// Phase exponent of tau = exp(i*pi*(q^2+1)/q), stored mod 2q. tau^2 = omega,
// the primitive q-th root used by the Weyl commutation relations; for q = 2
// tau = i and these are the usual {1, i, -1, -i}.
struct Phase {
  int q = 2;
  int exp = 0;

  Phase() = default;
  Phase(int q_, int e) : q(q_), exp(((e % (2 * q_)) + 2 * q_) % (2 * q_)) {}

  Phase mul(const Phase &o) const { return Phase(q, exp + o.exp); }
  Phase inverse() const { return Phase(q, -exp); }
  Phase conj() const { return Phase(q, -exp); }
  Phase pow(int e) const { return Phase(q, exp * e); }
  bool is_one() const { return exp == 0; }
  bool operator==(const Phase &o) const { return q == o.q && exp == o.exp; }

  std::complex<double> value() const;
  std::string to_string() const;  // "+1", "-i", "t^3", ...
};

Phase omega_phase(int q, int e);  // omega^e = tau^{2e}

// Weyl/Pauli operator on n qudits modulo phase, as the length-2n residue
// vector b = (x_1, z_1, x_2, z_2, ...). The represented operator is the
// canonical W(b) = prod_j tau^{x_j z_j} X_j^{x_j} Z_j^{z_j}; for q = 2 that is
// the Hermitian Pauli with i^{#Y} included.
struct PauliString {
  int q = 2;
  int n = 0;
  std::vector<uint8_t> b;

  PauliString() = default;
  PauliString(int q_, int n_) : q(q_), n(n_), b(size_t(2 * n_), 0) {}

  int x(int j) const { return b[size_t(2 * j)]; }
  int z(int j) const { return b[size_t(2 * j) + 1]; }
  void set_x(int j, int v) { b[size_t(2 * j)] = uint8_t(((v % q) + q) % q); }
  void set_z(int j, int v) { b[size_t(2 * j) + 1] = uint8_t(((v % q) + q) % q); }

  bool is_identity() const;
  bool operator==(const PauliString &o) const { return q == o.q && n == o.n && b == o.b; }

  // Index in [0, q^{2n}) enumerating all strings, row-major over b.
  uint64_t index() const;
  static PauliString from_index(int q, int n, uint64_t idx);

  std::string to_string() const;  // "XZ", "IY", or "X1Z2.X0Z1" for q > 2
};

// W(b) * W(b') = tau^e * W(b + b'); returns (W(b+b'), tau^e).
std::pair<PauliString, Phase> pauli_mul(const PauliString &p, const PauliString &r);

// chi(P, Q) = tr(P Q P^dag Q^dag)/d = omega^{<b(P), b(Q)>}.
Phase chi(const PauliString &p, const PauliString &r);

// Symplectic pairing s with P Q = omega^s Q P.
int symplectic(const PauliString &p, const PauliString &r);

struct AnticommGraph {
  gf::FMatrix g;
};

AnticommGraph anticomm_graph(std::span<const PauliString> ps, int q_hint = 2);

// Pauli operator on k tensor copies: row j of `rows` is the bit string of the
// factor on copy j, plus a global tau-phase.
struct PauliTensor {
  int q = 2;
  int n = 0;
  int k = 0;
  gf::FMatrix rows;  // k x 2n
  Phase phase;

  PauliTensor() = default;
  PauliTensor(int q_, int n_, int k_)
      : q(q_), n(n_), k(k_), rows(q_, k_, 2 * n_), phase(q_, 0) {}

  PauliString factor(int copy) const;
  void set_factor(int copy, const PauliString &p);
  uint64_t index() const;  // in [0, q^{2nk}), phase ignored
  static PauliTensor from_index(int q, int n, int k, uint64_t idx);
  bool operator==(const PauliTensor &o) const {
    return q == o.q && n == o.n && k == o.k && rows == o.rows && phase == o.phase;
  }
};

struct TensorDecomposition {
  gf::FMatrix v;                   // k x m, reduced column echelon
  std::vector<PauliString> paulis; // m algebraically independent factors
  Phase phase;                     // input = phase * prod_i paulis[i]^{(x) v_i}
};

TensorDecomposition decompose_tensor(const PauliTensor &t);

// Inverse of decompose_tensor: phase * prod_i P_i^{(x) v_i} as a PauliTensor
// on n qudits.
PauliTensor compose_tensor(int n, const gf::FMatrix &v, std::span<const PauliString> paulis, const Phase &phase);

// Product of the k copy factors of t in copy order, including t.phase;
// phi(t) = tr(t T_cycle)/d: the returned flag is false when the product is
// not proportional to the identity (trace zero).
struct CycleTrace {
  bool nonzero = false;
  Phase phase;
};
CycleTrace cycle_trace_phase(const PauliTensor &t);

// m algebraically independent Paulis on n qudits realizing the given
// anticommutation graph, via the canonical X/Z pair construction.
std::vector<PauliString> sample_graph_realization(const gf::FMatrix &g, int n);

// Text forms. Qubits: one letter of IXYZ per qubit, copies joined by '|'
// ("XX|ZI|YY"). Qudits: per copy, one "X<a>Z<c>" block per qudit, qudits
// joined by '.', copies joined by '|'.
std::string format_pauli(const PauliString &p);
PauliString parse_pauli(int q, const std::string &s);
std::string format_tensor(const PauliTensor &t);
PauliTensor parse_tensor(int q, const std::string &s);

}  // namespace cliffcom::pauli
