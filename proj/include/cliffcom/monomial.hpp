#pragma once

#include <string>
#include <vector>

#include "cliffcom/fmatrix.hpp"

namespace cliffcom::mono {

// Pauli monomial Omega(V, M) on k tensor copies: V is k x m with zero-sum
// columns (even Hamming weight for q = 2), M holds the pairwise commutation
// character exponents (symmetric zero-diagonal for q = 2, antisymmetric for
// q > 2). m = 0 is the identity operator.
struct Monomial {
  int k = 0;
  int q = 2;
  gf::FMatrix V;
  gf::FMatrix M;

  Monomial() = default;
  Monomial(int k_, int q_, gf::FMatrix v, gf::FMatrix m);

  static Monomial identity(int k, int q);

  int m() const { return V.cols(); }

  // Halved column weight class: 0 means projective-type ("even") column,
  // nonzero means unitary-type ("odd").
  int col_half_weight(int i) const;

  bool operator==(const Monomial &o) const { return k == o.k && q == o.q && V == o.V && M == o.M; }
  std::string key() const;
};

// Lambda packing of (w, M, H): Lambda_ij = M_ij + w_i d_ij + H_ij [i<j];
// transforms as Lambda -> A^T Lambda A under V -> V A.
gf::FMatrix lambda_of(const Monomial &m);

Monomial primitive(int k, const std::vector<int> &v, int q = 2);  // throws OddColumn
Monomial swap_monomial(int k, int q, int i, int j);
Monomial perm_monomial(int k, int q, const std::vector<int> &perm);  // perm[i] = pi(i), 0-based

Monomial apply_gl(const Monomial &m, const gf::GLTransform &a);
Monomial apply_gl_mat(const Monomial &m, const gf::FMatrix &a);  // a assumed invertible
Monomial add_column(const Monomial &m, int target, int source);
Monomial swap_columns(const Monomial &m, int i, int j);
Monomial adjoint(const Monomial &m);

struct ReductionResult {
  Monomial reduced;
  int dpower = 0;  // alpha: original = d^alpha * reduced
  int beta = 0;    // number of absorbed linear dependencies
};

ReductionResult reduce(const Monomial &m);
ReductionResult multiply(const Monomial &a, const Monomial &b);

struct NormalForm {
  Monomial projective;  // commuting even columns, no phases
  Monomial unitary;     // odd columns, no phases
};

NormalForm normal_form(const Monomial &m);

int trace_exponent(const Monomial &m);  // tr = d^{k - m + 2 beta}
int order(const Monomial &m);

enum class MonomialClass { projector_scaled, unitary, product };
MonomialClass classify(const Monomial &m);
std::string to_string(MonomialClass c);

bool is_reduced(const Monomial &m);

// Unique representative of the gauge class: reduce, then fix the gauge with
// the column-echelon transform of V.
Monomial canonical(const Monomial &m);

}  // namespace cliffcom::mono
