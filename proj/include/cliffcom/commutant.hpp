#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cliffcom/bigint.hpp"
#include "cliffcom/fmatrix.hpp"
#include "cliffcom/monomial.hpp"
#include "cliffcom/pauli.hpp"

namespace cliffcom::comm {

// Canonical label [V, G] of one orthogonal basis element mho_I: V is the
// reduced-column-echelon basis of the even subspace, which fixes the gauge,
// so G is determined within the class.
struct CommClass {
  int k = 0;
  int q = 2;
  gf::FMatrix V;  // k x m
  gf::FMatrix G;  // m x m

  int m() const { return V.cols(); }
  int half_rank() const { return gf::rank(G) / 2; }
  std::string key() const { return V.key() + G.key(); }
};

struct CountRow {
  int m = 0;
  int r = 0;
  BigUint count;
};

struct CountReport {
  int n = 0, k = 0, q = 2;
  std::vector<CountRow> rows;
  BigUint total;
};

CountReport dimension(int n, int k, int q = 2);
BigUint gaussian_binomial(int top, int m, int q);      // [top choose m]_q
BigUint antisym_rank_count(int m, int r, int q);       // alternating m x m of rank 2r
BigUint closed_product_form(int k);                    // prod_{i=0}^{k-2}(2^i + 1), q = 2, n >= k-1
BigUint reduced_monomial_count(int k, int q = 2);      // |P| = sum_m [k-1 m]_q q^{m(m-1)/2}

void enumerate_classes_visit(int n, int k, int q, const std::function<void(const CommClass &)> &fn,
                             int shard_index = 0, int shard_count = 1);
std::vector<CommClass> enumerate_classes(int n, int k, int q = 2, int shard_index = 0, int shard_count = 1);

BigUint orbit_size(const CommClass &cls, int n);  // |S_{[V,G]}|, throws Infeasible

// m algebraically independent Paulis on n qudits whose anticommutation graph
// equals cls.G (canonical X/Z construction conjugated back).
std::vector<pauli::PauliString> sample_class_member(const CommClass &cls, int n);

// Lazy stream of (P, phi(P)) over S_{[V,G]} on n qudits.
class MhoCoefficients {
 public:
  MhoCoefficients(CommClass cls, int n);
  // Returns false when the stream is exhausted.
  bool next(pauli::PauliTensor &tensor, pauli::Phase &phi);
  const BigUint &normalization() const { return norm_; }

 private:
  CommClass cls_;
  int n_;
  uint64_t idx_ = 0;
  uint64_t total_ = 0;
  BigUint norm_;
};

// Binary/omega Fourier transform between Pauli monomials Omega(V, M) and
// graph-based monomials mho(V, G). Coefficients are omega^exp; the inverse
// direction carries the overall prefactor q^{-m(m-1)/2}.
struct FourierTerm {
  gf::FMatrix label;  // G for the forward map, M for the inverse map
  int omega_exp = 0;
};
struct FourierSum {
  std::vector<FourierTerm> terms;
  int prefactor_exp = 0;  // coefficient prefactor q^{-prefactor_exp}
};
FourierSum fourier(const mono::Monomial &m);
FourierSum inverse_fourier(const gf::FMatrix &v, const gf::FMatrix &g);

// Reduced-monomial basis (the set P): canonical V per even subspace, all M.
std::vector<mono::Monomial> reduced_monomial_basis(int k, int q = 2);

struct GramMatrix {
  std::vector<mono::Monomial> basis;
  std::vector<int> expo;  // entry (i, j) of the Gram matrix is d^{expo[i*nb+j]}
  int nb() const { return int(basis.size()); }
  int at(int i, int j) const { return expo[size_t(i) * basis.size() + j]; }
};
GramMatrix gram(const std::vector<mono::Monomial> &basis);
GramMatrix gram_serial(const std::vector<mono::Monomial> &basis);

struct WeingartenMatrix {
  int nb = 0;
  double d = 0;
  std::vector<double> w;     // numeric Gram
  std::vector<double> winv;  // (pseudo-)inverse
  bool pseudo_inverse = false;
  bool ill_conditioned = false;
  int rank = 0;
  double cond = 0;
};
WeingartenMatrix weingarten(const GramMatrix &g, double d, double cond_bound = 1e12);

// Two-sided S_k orbit decomposition of the reduced-monomial basis:
// Omega ~ T_pi Omega T_sigma. k <= 7 enumerates everything; k = 8 grows the
// known representatives. Row names carry the column weights of a
// minimal-order member, with the pairwise overlap profile when needed.
struct ClassTableRow {
  std::string name;
  mono::Monomial rep;
  BigUint size;
};
struct PermClassTable {
  int k = 0;
  std::vector<ClassTableRow> rows;
  BigUint total;
};
PermClassTable class_table(int k, int q = 2);

}  // namespace cliffcom::comm
