#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "cliffcom/commutant.hpp"
#include "cliffcom/dense.hpp"
#include "cliffcom/errors.hpp"
#include "cliffcom/linalg.hpp"
#include "cliffcom/monomial.hpp"

using namespace cliffcom;
using namespace cliffcom::dense;
using pauli::parse_pauli;
using pauli::parse_tensor;

TEST_CASE("dense pauli basics") {
  DenseOperator z = dense_pauli(parse_pauli(2, "Z"));
  CHECK(z.at(0, 0) == cplx(1.0, 0.0));
  CHECK(z.at(1, 1) == cplx(-1.0, 0.0));
  DenseOperator y = dense_pauli(parse_pauli(2, "Y"));
  CHECK(std::abs(y.at(0, 1) - cplx(0.0, -1.0)) < 1e-14);
  CHECK(std::abs(y.at(1, 0) - cplx(0.0, 1.0)) < 1e-14);
  DenseOperator id = dense_pauli(parse_pauli(2, "II"));
  CHECK(id.max_abs_diff(DenseOperator::identity(4, 2, 1, 2)) < 1e-14);

  std::mt19937_64 rng(31);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      int n = 1 + int(rng() % 2);
      pauli::PauliString a = pauli::PauliString::from_index(q, n, rng() % uint64_t(std::pow(q, 2 * n)));
      pauli::PauliString b = pauli::PauliString::from_index(q, n, rng() % uint64_t(std::pow(q, 2 * n)));
      auto [r, ph] = pauli::pauli_mul(a, b);
      CHECK(dense_pauli(a).mul(dense_pauli(b)).max_abs_diff(dense_pauli(r).scaled(ph.value())) < 1e-11);
    }
  }
}

TEST_CASE("dense_to_pauli decodes conjugated paulis") {
  std::mt19937_64 rng(32);
  for (int q : {2, 3}) {
    int n = 2;
    auto gens = clifford_generators(n, q);
    for (int trial = 0; trial < 40; ++trial) {
      pauli::PauliString p = pauli::PauliString::from_index(q, n, rng() % uint64_t(std::pow(q, 2 * n)));
      DenseOperator d = dense_pauli(p);
      const DenseOperator &g = gens[rng() % gens.size()];
      DenseOperator c = g.mul(d).mul(g.dagger());
      auto dec = dense_to_pauli(c);
      CHECK(std::abs(std::abs(dec.phase) - 1.0) < 1e-9);
      CHECK(dense_pauli(dec.p).scaled(dec.phase).max_abs_diff(c) < 1e-9);
    }
  }
}

TEST_CASE("permutation operators") {
  // T_(12) on two qubit copies equals (1/d) sum_P P (x) P
  DenseOperator swap = permutation_op({1, 0}, 1, 2);
  DenseOperator acc(4, 1, 2, 2);
  for (uint64_t i = 0; i < 4; ++i) {
    pauli::PauliString p = pauli::PauliString::from_index(2, 1, i);
    DenseOperator d = dense_pauli(p);
    acc = acc.add(d.kron(d));
  }
  CHECK(acc.scaled(0.5).max_abs_diff(swap) < 1e-12);

  // composition: T_sigma T_pi = T_{sigma o pi}
  std::vector<int> sigma{1, 2, 0}, pi{0, 2, 1};
  std::vector<int> comp(3);
  for (int i = 0; i < 3; ++i) comp[size_t(i)] = sigma[size_t(pi[size_t(i)])];
  CHECK(permutation_op(sigma, 1, 2).mul(permutation_op(pi, 1, 2)).max_abs_diff(permutation_op(comp, 1, 2)) <
        1e-12);

  // T_pi as a monomial
  DenseOperator viaMono = dense_monomial(mono::perm_monomial(3, 2, sigma), 1);
  CHECK(viaMono.max_abs_diff(permutation_op(sigma, 1, 2)) < 1e-12);
  DenseOperator viaMono3 = dense_monomial(mono::perm_monomial(3, 3, sigma), 1);
  CHECK(viaMono3.max_abs_diff(permutation_op(sigma, 1, 3)) < 1e-12);
}

TEST_CASE("clifford generators") {
  for (int q : {2, 3}) {
    for (int n : {1, 2}) {
      auto specs = clifford_generator_specs(n, q);
      auto gens = clifford_generators(n, q);
      REQUIRE(specs.size() == gens.size());
      for (size_t i = 0; i < gens.size(); ++i) {
        CHECK(gens[i].is_unitary(1e-12));
        // conjugation maps Weyl operators to phased Weyl operators
        for (uint64_t pidx = 1; pidx < uint64_t(std::pow(q, 2 * n)); ++pidx) {
          pauli::PauliString p = pauli::PauliString::from_index(q, n, pidx);
          DenseOperator c = gens[i].mul(dense_pauli(p)).mul(gens[i].dagger());
          auto dec = dense_to_pauli(c);
          CHECK(std::abs(std::abs(dec.phase) - 1.0) < 1e-9);
        }
      }
    }
  }
  // phase gate sends X to Y up to sign
  auto gens = clifford_generators(1, 2);
  DenseOperator s = gens[1];
  DenseOperator x = dense_pauli(parse_pauli(2, "X"));
  DenseOperator y = dense_pauli(parse_pauli(2, "Y"));
  CHECK(s.mul(x).mul(s.dagger()).max_abs_diff(y) < 1e-12);
}

TEST_CASE("single-qubit clifford group has 24 elements modulo phase") {
  auto gens = clifford_generators(1, 2);
  auto canon = [](const DenseOperator &u) {
    // normalize the global phase by the first nonzero entry
    cplx ref = 0;
    for (const auto &v : u.a)
      if (std::abs(v) > 1e-9) {
        ref = v / std::abs(v);
        break;
      }
    std::string key;
    for (const auto &v : u.a) {
      cplx w = v / ref;
      key += std::to_string(int(std::lround(w.real() * 1e6))) + "," +
             std::to_string(int(std::lround(w.imag() * 1e6))) + ";";
    }
    return key;
  };
  std::map<std::string, DenseOperator> group;
  group.emplace(canon(DenseOperator::identity(2, 1, 1, 2)), DenseOperator::identity(2, 1, 1, 2));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<DenseOperator> cur;
    for (auto &kv : group) cur.push_back(kv.second);
    for (const auto &u : cur)
      for (const auto &g : gens) {
        DenseOperator w = g.mul(u);
        if (group.emplace(canon(w), w).second) grew = true;
      }
  }
  CHECK(group.size() == 24);
}

TEST_CASE("conjugate_kfold matches explicit tensor powers") {
  std::mt19937_64 rng(33);
  for (int q : {2, 3}) {
    int n = q == 2 ? 2 : 1;
    int k = 2;
    auto specs = clifford_generator_specs(n, q);
    auto gens = clifford_generators(n, q);
    int dim = int(std::pow(q, n * k));
    DenseOperator o(dim, n, k, q);
    for (auto &v : o.a) v = cplx(double(rng() % 17) - 8.0, double(rng() % 17) - 8.0);
    for (size_t i = 0; i < specs.size(); ++i) {
      DenseOperator gk = gens[i];
      for (int c = 1; c < k; ++c) gk = gk.kron(gens[i]);
      DenseOperator want = gk.mul(o).mul(gk.dagger());
      CHECK(conjugate_kfold(o, specs[i], n, k, q).max_abs_diff(want) < 1e-9);
    }
  }
}

TEST_CASE("exact twirl basics") {
  // identity maps to identity
  DenseOperator id = DenseOperator::identity(16, 1, 4, 2);
  CHECK(exact_twirl(id).max_abs_diff(id) < 1e-12);

  // a Pauli with an odd-weight factor pattern twirls to zero
  DenseOperator odd = dense_pauli(parse_tensor(2, "X|X|X|I"));
  CHECK(exact_twirl(odd).max_abs() < 1e-12);

  // twirl of X^{(x)4} at n=1: the average over the orbit {X,Y,Z}^{(x)4}
  DenseOperator x4 = dense_pauli(parse_tensor(2, "X|X|X|X"));
  DenseOperator omega4 = dense_monomial(mono::primitive(4, {1, 1, 1, 1}), 1);
  DenseOperator want = omega4.scaled(2.0).sub(DenseOperator::identity(16, 1, 4, 2)).scaled(1.0 / 3.0);
  CHECK(exact_twirl(x4).max_abs_diff(want) < 1e-12);

  // parallel and serial paths agree exactly
  std::mt19937_64 rng(34);
  DenseOperator o(16, 1, 4, 2);
  for (auto &v : o.a) v = cplx(double(rng() % 13) - 6.0, double(rng() % 13) - 6.0);
  CHECK(exact_twirl(o).max_abs_diff(exact_twirl_serial(o)) == 0.0);
}

TEST_CASE("exact twirl is idempotent and lands in the commutant") {
  std::mt19937_64 rng(35);
  ClassTable tab = build_class_table(2, 1, 4, true);
  DenseOperator o(16, 1, 4, 2);
  for (auto &v : o.a) v = cplx(double(rng() % 9) - 4.0, double(rng() % 9) - 4.0);
  DenseOperator t1 = exact_twirl(o, tab);
  CHECK(exact_twirl(t1, tab).max_abs_diff(t1) < 1e-10);
  CHECK(clifford_commutation_residual(t1) < 1e-10);

  // a random non-commutant Hermitian is detected with margin
  DenseOperator h(16, 1, 4, 2);
  for (int i = 0; i < 16; ++i)
    for (int j = i; j < 16; ++j) {
      cplx v(double(rng() % 9) - 4.0, i == j ? 0.0 : double(rng() % 9) - 4.0);
      h.at(i, j) = v;
      h.at(j, i) = std::conj(v);
    }
  CHECK(!commutes_with_clifford(h, 1e-3));
}

TEST_CASE("haar gram and twirl") {
  double d = 4.0;
  HaarGram hg = haar_gram(2, d);
  // closed form: (1/(d^2-1)) [[1, -1/d], [-1/d, 1]]
  double c = 1.0 / (d * d - 1.0);
  CHECK(std::abs(hg.winv[0] - c) < 1e-12);
  CHECK(std::abs(hg.winv[1] + c / d) < 1e-12);
  CHECK(std::abs(hg.winv[3] - c) < 1e-12);

  // Haar orbit of a pure state is the normalized symmetric projector
  StateVector psi = random_state(2, 7);
  for (int k = 2; k <= 3; ++k) {
    DenseOperator rho = projector(psi, k);
    DenseOperator got = haar_twirl(rho);
    DenseOperator pis = sym_projector(k, 2, 2);
    double trp = pis.trace().real();
    CHECK(got.max_abs_diff(pis.scaled(1.0 / trp)) < 1e-10);
  }
}

TEST_CASE("average 6-point OTOC at d=4 is 8/45") {
  // (1/d) sum_{pi,sigma} (Lambda^{-1})_{pi,sigma} v_sigma v_pi with
  // v_pi = tr(T_pi P x Q x QP), realized as (1/d) tr(Phi^3(P x Q x QP) (Q x P x PQ)),
  // for commuting non-identity P != Q
  int n = 2, q = 2;
  double d = 4.0;
  pauli::PauliString P = parse_pauli(2, "XI"), Q = parse_pauli(2, "XX");
  auto [QP, ph1] = pauli::pauli_mul(Q, P);
  auto [PQ, ph2] = pauli::pauli_mul(P, Q);
  DenseOperator a = dense_pauli(P).kron(dense_pauli(Q)).kron(dense_pauli(QP).scaled(ph1.value()));
  DenseOperator b = dense_pauli(Q).kron(dense_pauli(P)).kron(dense_pauli(PQ).scaled(ph2.value()));
  a.n = n; a.k = 3; a.q = q;
  b.n = n; b.k = 3; b.q = q;
  cplx val = haar_twirl(a).mul(b).trace() / d;
  double want = 2.0 * d * d / ((d * d - 4.0) * (d * d - 1.0));  // = 8/45
  CHECK(std::abs(want - 8.0 / 45.0) < 1e-15);
  CHECK(std::abs(val - want) < 1e-10);
}

TEST_CASE("state helpers") {
  StateVector t = t_state(1);
  CHECK(std::abs(t.amps[0] - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
  StateVector r1 = random_state(3, 42), r2 = random_state(3, 42), r3 = random_state(3, 43);
  CHECK(r1.amps == r2.amps);
  CHECK(r1.amps != r3.amps);
  double norm = 0;
  for (auto &v : r1.amps) norm += std::norm(v);
  CHECK(std::abs(norm - 1.0) < 1e-12);

  DenseOperator rho = projector(t, 2);
  CHECK(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-12);
  CHECK(rho.mul(rho).max_abs_diff(rho) < 1e-12);
}

TEST_CASE("dense cap guard") {
  int old = dense_cap();
  set_dense_cap(8);
  CHECK_THROWS_AS(permutation_op({1, 0, 2, 3}, 1, 2), TooLarge);
  set_dense_cap(old);
}

TEST_CASE("jacobi eigensolver sanity") {
  std::mt19937_64 rng(36);
  int n = 24;
  std::vector<cplx> a(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cplx v(double(rng() % 21) - 10.0, i == j ? 0.0 : double(rng() % 21) - 10.0);
      a[size_t(i) * n + j] = v;
      a[size_t(j) * n + i] = std::conj(v);
    }
  auto e = linalg::eig_hermitian(a, n);
  // reconstruct
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int l = 0; l < n; ++l)
        s += e.vecs[size_t(i) * n + l] * e.vals[size_t(l)] * std::conj(e.vecs[size_t(j) * n + l]);
      worst = std::max(worst, std::abs(s - a[size_t(i) * n + j]));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("weingarten twirl equals the exact twirl") {
  // exact-inverse regime (k <= n+1) and the pseudo-inverse regime
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {1, 4}}) {
    auto basis = comm::reduced_monomial_basis(k, 2);
    auto w = comm::weingarten(comm::gram(basis), std::pow(2.0, n));
    ClassTable tab = build_class_table(2, n, k, true);
    std::mt19937_64 rng(uint64_t(100 * n + k));
    DenseOperator o(1 << (n * k), n, k, 2);
    for (auto &v : o.a) v = cplx(double(rng() % 33) - 16.0, double(rng() % 33) - 16.0);
    DenseOperator wt = weingarten_twirl(o, basis, w.winv);
    DenseOperator ex = exact_twirl(o, tab);
    CHECK(wt.max_abs_diff(ex) < 1e-8);
    CHECK((k <= n + 1) != w.pseudo_inverse);
    // commutes with generator tensor powers
    CHECK(clifford_commutation_residual(wt) < 1e-10);
  }
}

TEST_CASE("clifford orbit of a stabilizer state is flat over the monomial basis") {
  const int n = 2, k = 4;
  double d = 4.0;
  DenseOperator lhs = exact_twirl(projector(zero_state(n), k));
  auto basis = comm::reduced_monomial_basis(k, 2);
  DenseOperator sum(lhs.dim, n, k, 2);
  for (const auto &m : basis) sum = sum.add(dense_monomial(m, n));
  double zn = d;
  for (int i = 0; i <= k - 2; ++i) zn *= d + std::pow(2.0, i);
  CHECK(std::abs(sum.trace().real() - zn) < 1e-6);  // Z_n = sum of traces
  CHECK(lhs.max_abs_diff(sum.scaled(1.0 / zn)) < 1e-10);
}

TEST_CASE("anticommutation graphs are invariant under clifford conjugation") {
  std::mt19937_64 rng(55);
  for (int n : {1, 2}) {
    auto gens = clifford_generators(n, 2);
    for (int trial = 0; trial < 30; ++trial) {
      int m = 1 + int(rng() % 3);
      std::vector<pauli::PauliString> ps;
      for (int i = 0; i < m; ++i)
        ps.push_back(pauli::PauliString::from_index(2, n, rng() % uint64_t(1 << (2 * n))));
      DenseOperator c = DenseOperator::identity(1 << n, n, 1, 2);
      for (int step = 0; step < 6; ++step) c = gens[rng() % gens.size()].mul(c);
      std::vector<pauli::PauliString> conj;
      for (const auto &p : ps) {
        auto dec = dense_to_pauli(c.mul(dense_pauli(p)).mul(c.dagger()));
        conj.push_back(dec.p);
      }
      CHECK(pauli::anticomm_graph(ps).g == pauli::anticomm_graph(conj).g);
    }
  }
}

TEST_CASE("twirl image lies in the span of the basis elements") {
  ClassTable tab = build_class_table(2, 1, 4, true);
  std::vector<DenseOperator> mhos;
  for (size_t c = 0; c < tab.keys.size(); ++c) mhos.push_back(dense_mho(tab, int(c)));
  std::mt19937_64 rng(91);
  DenseOperator o(16, 1, 4, 2);
  for (auto &v : o.a) v = cplx(double(rng() % 21) - 10.0, double(rng() % 21) - 10.0);
  DenseOperator tw = exact_twirl(o, tab);
  // subtract the orthogonal projection onto each mho_I
  DenseOperator resid = tw;
  for (const auto &m : mhos) {
    cplx ip = 0;
    double nn = 0;
    for (size_t l = 0; l < m.a.size(); ++l) {
      ip += std::conj(m.a[l]) * resid.a[l];
      nn += std::norm(m.a[l]);
    }
    resid = resid.sub(m.scaled(ip / nn));
  }
  CHECK(resid.max_abs() < 1e-9);
}
