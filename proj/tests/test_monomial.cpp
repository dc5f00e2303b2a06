#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffcom/dense.hpp"
#include "cliffcom/errors.hpp"
#include "cliffcom/monomial.hpp"

using namespace cliffcom;
using namespace cliffcom::mono;
using dense::DenseOperator;

namespace {

Monomial random_monomial(std::mt19937_64 &rng, int k, int max_m, int q = 2) {
  int m = int(rng() % uint64_t(max_m + 1));
  gf::FMatrix v(q, k, m), mm(q, m, m);
  for (int j = 0; j < m; ++j) {
    int s;
    do {
      s = 0;
      for (int i = 0; i < k; ++i) {
        int e = int(rng() % uint64_t(q));
        v.set(i, j, e);
        s += e;
      }
    } while (s % q != 0);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      int e = int(rng() % uint64_t(q));
      mm.set(i, j, e);
      mm.set(j, i, q == 2 ? e : (q - e) % q);
    }
  return Monomial(k, q, v, mm);
}

gf::FMatrix random_gl(std::mt19937_64 &rng, int q, int n) {
  for (;;) {
    gf::FMatrix a(q, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.set(i, j, int(rng() % uint64_t(q)));
    if (gf::rank(a) == n) return a;
  }
}

Monomial from_cols(int k, std::vector<std::vector<int>> cols,
                   std::vector<std::pair<int, int>> phases = {}, int q = 2) {
  int m = int(cols.size());
  gf::FMatrix v(q, k, m), mm(q, m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < k; ++i) v.set(i, j, cols[size_t(j)][size_t(i)]);
  for (auto [i, j] : phases) {
    mm.set(i, j, 1);
    mm.set(j, i, q == 2 ? 1 : q - 1);
  }
  return Monomial(k, q, v, mm);
}

double dense_pow_diff(const Monomial &a, const Monomial &b, int n, double scale_b = 1.0) {
  DenseOperator da = dense::dense_monomial(a, n);
  DenseOperator db = dense::dense_monomial(b, n).scaled(scale_b);
  return da.max_abs_diff(db);
}

}  // namespace

TEST_CASE("primitive construction and classification") {
  // k=4, v=(1,1,0,0): the swap operator between copies 1 and 2
  Monomial t12 = primitive(4, {1, 1, 0, 0});
  DenseOperator d = dense::dense_monomial(t12, 1);
  DenseOperator swap = dense::permutation_op({1, 0, 2, 3}, 1, 2);
  CHECK(d.max_abs_diff(swap) < 1e-12);

  Monomial omega4 = primitive(4, {1, 1, 1, 1});
  CHECK(classify(omega4) == MonomialClass::projector_scaled);
  DenseOperator d4 = dense::dense_monomial(omega4, 1);
  CHECK(d4.mul(d4).max_abs_diff(d4.scaled(2.0)) < 1e-12);  // (Omega_4)^2 = d Omega_4

  Monomial omega6 = primitive(6, {1, 1, 1, 1, 1, 1});
  CHECK(classify(omega6) == MonomialClass::unitary);
  CHECK(dense::dense_monomial(omega6, 1).is_unitary(1e-12));

  CHECK_THROWS_AS(primitive(4, {1, 1, 1, 0}), OddColumn);
}

TEST_CASE("gl moves preserve the operator") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 2 + int(rng() % 5);  // k <= 6, dense at n=1
    Monomial m = random_monomial(rng, k, std::min(k, 4));
    if (m.m() == 0) continue;
    gf::FMatrix a = random_gl(rng, 2, m.m());
    Monomial m2 = apply_gl_mat(m, a);
    CHECK(dense_pow_diff(m, m2, 1) < 1e-10);
  }
  // a couple of q=3 moves
  for (int trial = 0; trial < 60; ++trial) {
    Monomial m = random_monomial(rng, 3, 2, 3);
    if (m.m() == 0) continue;
    gf::FMatrix a = random_gl(rng, 3, m.m());
    CHECK(dense_pow_diff(m, apply_gl_mat(m, a), 1) < 1e-10);
  }
}

TEST_CASE("column move phase rules") {
  // adding an even commuting column onto a neighbor adds no phase
  Monomial even2 = from_cols(8, {{1, 1, 1, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1, 1, 1}});
  Monomial added = add_column(even2, 1, 0);
  CHECK(added.M.at(0, 1) == 0);
  CHECK(dense_pow_diff(even2, added, 1) < 1e-12);

  // adding an odd column toggles the pair phase
  Monomial odd2 = from_cols(6, {{1, 1, 0, 0, 0, 0}, {0, 0, 1, 1, 1, 1}});
  Monomial added2 = add_column(odd2, 1, 0);
  CHECK(added2.M.at(0, 1) == 1);
  CHECK(dense_pow_diff(odd2, added2, 1) < 1e-12);

  // swapping columns with odd overlap toggles the pair phase
  Monomial ov = from_cols(6, {{1, 1, 1, 1, 0, 0}, {0, 0, 0, 1, 1, 0}});
  Monomial sw = swap_columns(ov, 0, 1);
  CHECK(sw.M.at(0, 1) == 1);
  CHECK(dense_pow_diff(ov, sw, 1) < 1e-12);
}

TEST_CASE("the worked k=6 identity") {
  Monomial lhs = from_cols(6, {{1, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 1, 1}}, {{0, 1}});
  Monomial rhs = from_cols(6, {{1, 1, 1, 1, 1, 1}, {1, 1, 0, 0, 0, 0}, {0, 0, 1, 1, 0, 0}, {0, 0, 0, 0, 1, 1}});
  CHECK(canonical(lhs).key() == canonical(rhs).key());
  for (int n = 1; n <= 2; ++n) {
    CHECK(dense::dense_monomial(lhs, n).max_abs_diff(dense::dense_monomial(rhs, n)) < 1e-10);
  }
}

TEST_CASE("reduce") {
  std::mt19937_64 rng(22);
  Monomial omega4 = primitive(4, {1, 1, 1, 1});
  auto r0 = reduce(omega4);
  CHECK(r0.dpower == 0);
  CHECK(r0.reduced == omega4);

  // even column squared: d^1 times itself
  auto sq = multiply(omega4, omega4);
  CHECK(sq.dpower == 1);
  CHECK(canonical(sq.reduced).key() == canonical(omega4).key());

  // odd column squared: the identity monomial, no d factor
  Monomial omega6 = primitive(6, {1, 1, 1, 1, 1, 1});
  auto sq6 = multiply(omega6, omega6);
  CHECK(sq6.dpower == 0);
  CHECK(sq6.reduced.m() == 0);

  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + int(rng() % 4);
    Monomial m = random_monomial(rng, k, k + 2);
    auto r = reduce(m);
    CHECK(is_reduced(r.reduced));
    CHECK(r.dpower <= m.m() - r.reduced.m());
    double scale = std::pow(2.0, r.dpower);  // d = 2 at n = 1
    CHECK(dense_pow_diff(m, r.reduced, 1, scale) < 1e-9);
  }
}

TEST_CASE("multiply named cases") {
  Monomial omega4 = primitive(4, {1, 1, 1, 1});
  Monomial id4 = Monomial::identity(4, 2);
  auto p = multiply(omega4, id4);
  CHECK(p.dpower == 0);
  CHECK(p.reduced == omega4);

  Monomial t12 = swap_monomial(4, 2, 0, 1);
  auto invol = multiply(t12, t12);
  CHECK(invol.reduced.m() == 0);
  CHECK(invol.dpower == 0);

  auto o44 = multiply(omega4, omega4);
  CHECK(o44.dpower == 1);
}

TEST_CASE("trace exponents") {
  CHECK(trace_exponent(Monomial::identity(4, 2)) == 4);
  CHECK(trace_exponent(primitive(4, {1, 1, 1, 1})) == 3);
  Monomial o4 = primitive(4, {1, 1, 1, 1});
  auto prod = multiply(o4, o4);
  // recheck on the unreduced concatenation: m=2, beta=1 -> 4-2+2 = 4
  Monomial concat = from_cols(4, {{1, 1, 1, 1}, {1, 1, 1, 1}});
  CHECK(trace_exponent(concat) == 4);
  CHECK(std::abs(dense::dense_monomial(prod.reduced, 1).trace().real() * std::pow(2.0, prod.dpower) -
                 std::pow(2.0, 4)) < 1e-9);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    int k = 2 + int(rng() % 4);
    Monomial m = random_monomial(rng, k, k + 1);
    double tr = dense::dense_monomial(m, 1).trace().real();
    CHECK(std::abs(tr - std::pow(2.0, trace_exponent(m))) < 1e-8 * std::max(1.0, std::abs(tr)));
  }
}

TEST_CASE("order and classify") {
  CHECK(order(Monomial::identity(5, 2)) == 0);

  Monomial o44 = from_cols(6, {{1, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 1, 1}});
  CHECK(order(o44) == 2);
  CHECK(classify(o44) == MonomialClass::projector_scaled);

  Monomial o66 = from_cols(8, {{1, 1, 1, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 1, 1, 1, 1}});
  CHECK(order(o66) == 2);
  CHECK(classify(o66) == MonomialClass::unitary);

  Monomial mixed = from_cols(8, {{1, 1, 1, 1, 0, 0, 0, 0}, {0, 0, 1, 1, 1, 1, 1, 1}});
  CHECK(classify(mixed) == MonomialClass::product);
}

TEST_CASE("normal form") {
  Monomial o4 = primitive(4, {1, 1, 1, 1});
  auto nf = normal_form(o4);
  CHECK(nf.projective.m() == 1);
  CHECK(nf.unitary.m() == 0);

  Monomial o6 = primitive(6, {1, 1, 1, 1, 1, 1});
  auto nf6 = normal_form(o6);
  CHECK(nf6.projective.m() == 0);
  CHECK(nf6.unitary.m() == 1);

  // the rule-4 pair: two even commuting columns sharing a phase at k=6
  Monomial pair = from_cols(6, {{1, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 1, 1}}, {{0, 1}});
  auto nfp = normal_form(pair);
  CHECK(nfp.projective.m() == 0);
  CHECK(nfp.unitary.m() == 4);
  for (int n = 1; n <= 2; ++n) {
    DenseOperator lhs = dense::dense_monomial(pair, n);
    DenseOperator rhs = dense::dense_monomial(nfp.projective, n).mul(dense::dense_monomial(nfp.unitary, n));
    CHECK(lhs.max_abs_diff(rhs) < 1e-10);
  }

  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + int(rng() % 5);
    Monomial m = reduce(random_monomial(rng, k, k - 1)).reduced;
    auto f = normal_form(m);
    for (int j = 0; j < f.projective.m(); ++j) CHECK(f.projective.col_half_weight(j) == 0);
    for (int j = 0; j < f.unitary.m(); ++j) CHECK(f.unitary.col_half_weight(j) != 0);
    for (int i = 0; i < f.projective.m(); ++i)
      for (int j = i + 1; j < f.projective.m(); ++j)
        CHECK(f.projective.V.col_overlap_int(i, j) % 2 == 0);
    DenseOperator lhs = dense::dense_monomial(m, 1);
    DenseOperator rhs = dense::dense_monomial(f.projective, 1).mul(dense::dense_monomial(f.unitary, 1));
    CHECK(lhs.max_abs_diff(rhs) < 1e-9);
    // idempotence up to gauge: recombination has the same canonical form
    auto back = multiply(f.projective, f.unitary);
    CHECK(back.dpower == 0);
    CHECK(canonical(back.reduced).key() == canonical(m).key());
  }
}

TEST_CASE("adjoint and Hilbert-Schmidt structure") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 120; ++trial) {
    int k = 2 + int(rng() % 4);
    Monomial m = random_monomial(rng, k, k - 1);
    DenseOperator d = dense::dense_monomial(m, 1);
    CHECK(dense::dense_monomial(adjoint(m), 1).max_abs_diff(d.dagger()) < 1e-10);
    if (is_reduced(m) && m.m() > 0) {
      auto self = multiply(adjoint(m), m);
      CHECK(trace_exponent(self.reduced) + self.dpower == k);
      Monomial other = reduce(random_monomial(rng, k, k - 1)).reduced;
      auto pr = multiply(adjoint(m), other);
      int expo = (k - (m.m() + other.m())) + 2 * pr.beta;
      if (canonical(m).key() != canonical(other).key()) CHECK(expo <= k - 1);
    }
  }
}

TEST_CASE("per-qubit factorization cross-check") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2 + int(rng() % 3);  // k <= 4
    Monomial m = random_monomial(rng, k, 2);
    CHECK(dense::dense_monomial(m, 2).max_abs_diff(dense::dense_monomial_direct(m, 2)) < 1e-10);
  }
  Monomial m3 = random_monomial(rng, 3, 2);
  CHECK(dense::dense_monomial(m3, 3).max_abs_diff(dense::dense_monomial_direct(m3, 3)) < 1e-10);
  // q = 3 factorization
  for (int trial = 0; trial < 10; ++trial) {
    Monomial m = random_monomial(rng, 3, 2, 3);
    CHECK(dense::dense_monomial(m, 2).max_abs_diff(dense::dense_monomial_direct(m, 2)) < 1e-10);
  }
}

TEST_CASE("canonical representative") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 2 + int(rng() % 5);
    Monomial m = reduce(random_monomial(rng, k, k - 1)).reduced;
    if (m.m() == 0) continue;
    gf::FMatrix a = random_gl(rng, 2, m.m());
    CHECK(canonical(m).key() == canonical(apply_gl_mat(m, a)).key());
    CHECK(dense_pow_diff(m, canonical(m), 1) < 1e-10);
  }
}

TEST_CASE("qudit primitive") {
  Monomial o111 = primitive(3, {1, 1, 1}, 3);
  CHECK(classify(o111) == MonomialClass::projector_scaled);
  DenseOperator d = dense::dense_monomial(o111, 1);
  CHECK(d.mul(d).max_abs_diff(d.scaled(3.0)) < 1e-10);  // d = q^n = 3
  auto sq = multiply(o111, o111);
  CHECK(sq.dpower == 1);
  CHECK(canonical(sq.reduced).key() == canonical(o111).key());

  // q=5: the same column pattern is unitary ("Omega(1,1,-2)" with weight 1+1+9=11 != 0 mod 5)
  Monomial o5 = primitive(3, {1, 1, 3}, 5);
  CHECK(classify(o5) == MonomialClass::unitary);
}
