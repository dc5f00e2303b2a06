#pragma once

#include <map>
#include <string>
#include <vector>

#include "cliffcom/dense.hpp"
#include "cliffcom/monomial.hpp"

namespace cliffcom::magic {

// Expectation table tr(P psi) over all 4^n Hermitian Paulis (qubits only);
// index = PauliString::index(). Built once per state, then shared read-only.
std::vector<double> pauli_expectations(const dense::StateVector &s);
std::vector<double> pauli_expectations_serial(const dense::StateVector &s);

double stabilizer_purity(const dense::StateVector &s, int alpha);
double stabilizer_entropy(const dense::StateVector &s, int alpha);

// Delta_Omega = Re tr(Omega psi^{(x)k}) evaluated as a nested
// Pauli-expectation sum (no d^k matrices); the dense variant is the
// verification path and respects the dimension cap.
double generalized_purity(const dense::StateVector &s, const mono::Monomial &m);
double generalized_purity(const dense::StateVector &s, const mono::Monomial &m,
                          const std::vector<double> &ptable);
double generalized_purity_dense(const dense::StateVector &s, const mono::Monomial &m);

double bell_magic(const dense::StateVector &s);
double bell_magic_q_distribution(const dense::StateVector &s);  // the original double-sum form

double testing_success(const dense::StateVector &s);
double triple_purity(const dense::StateVector &s);

// Quasi-probability vector of the Clifford orbit of psi^{(x)k}, k in {4,5,6}:
// k=4 and k=5 from the closed forms, k=6 by solving the permutation-projected
// Gram system (computed symbolically, exact in d). Components sum to 1.
std::vector<double> state_orbit(const dense::StateVector &s, int k);

// Named monomials used by the reports.
mono::Monomial omega_monomial(int k, const std::vector<int> &weights);  // e.g. {4,4} at k=6

struct MagicReport {
  int n = 0;
  uint64_t seed = 0;
  std::string state_name;
  double tol = 1e-12;
  std::map<int, double> purities;   // alpha -> Delta_{2 alpha}
  std::map<int, double> entropies;  // alpha -> M_alpha
  std::map<std::string, double> generalized;
  double bell = 0;
  double p_succ = 0;
};

MagicReport magic_report(const dense::StateVector &s, const std::string &state_name, uint64_t seed);

}  // namespace cliffcom::magic
