#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cliffcom/bigint.hpp"
#include "cliffcom/errors.hpp"
#include "cliffcom/fmatrix.hpp"

using cliffcom::BigUint;
using namespace cliffcom::gf;

namespace {

FMatrix random_matrix(std::mt19937_64 &rng, int q, int rows, int cols) {
  FMatrix m(q, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, int(rng() % uint64_t(q)));
  return m;
}

FMatrix random_invertible(std::mt19937_64 &rng, int q, int n) {
  for (;;) {
    FMatrix m = random_matrix(rng, q, n, n);
    if (rank(m) == n) return m;
  }
}

// Exhaustive span of the columns of an F_2 matrix, as a set of row words.
std::set<uint64_t> column_span_f2(const FMatrix &m) {
  std::set<uint64_t> span{0};
  for (int j = 0; j < m.cols(); ++j) {
    uint64_t v = 0;
    for (int i = 0; i < m.rows(); ++i) v |= uint64_t(m.at(i, j)) << i;
    std::set<uint64_t> next = span;
    for (uint64_t s : span) next.insert(s ^ v);
    span = next;
  }
  return span;
}

}  // namespace

TEST_CASE("rank basics") {
  CHECK(rank(FMatrix::identity(2, 2)) == 2);
  FMatrix ones = FMatrix::from_string(2, "11/11");
  CHECK(rank(ones) == 1);
}

TEST_CASE("rank against exhaustive span enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    FMatrix m = random_matrix(rng, 2, 6, 3);
    auto span = column_span_f2(m);
    int r = 0;
    while ((size_t(1) << r) < span.size()) ++r;
    CHECK((size_t(1) << r) == span.size());
    CHECK(rank(m) == r);
  }
  // a 6x3 rank-2 witness with one dependent column
  FMatrix m = FMatrix::from_string(2, "101/011/110/000/101/011");
  CHECK(column_span_f2(m).size() == 4);
  CHECK(rank(m) == 2);
}

TEST_CASE("column echelon identity and permutation") {
  auto e = column_echelon(FMatrix::identity(2, 3));
  CHECK(e.echelon == FMatrix::identity(2, 3));
  CHECK(e.transform.matrix == FMatrix::identity(2, 3));

  FMatrix swapped = FMatrix::from_string(2, "01/10");
  auto e2 = column_echelon(swapped);
  CHECK(e2.echelon == FMatrix::identity(2, 2));
  CHECK(swapped.mul(e2.transform.matrix) == e2.echelon);
}

TEST_CASE("column echelon reproduces the input and is idempotent") {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 60; ++trial) {
      FMatrix m = random_matrix(rng, q, 8, 4);
      auto e = column_echelon(m);
      CHECK(m.mul(e.transform.matrix) == e.echelon);
      CHECK(e.transform.matrix.mul(e.transform.inverse) == FMatrix::identity(q, 4));
      auto e2 = column_echelon(e.echelon);
      CHECK(e2.echelon == e.echelon);
      if (q == 2) {
        FMatrix a = random_invertible(rng, 2, 4);
        CHECK(column_span_f2(m.mul(a)) == column_span_f2(m));
        CHECK(column_echelon(m.mul(a)).echelon == e.echelon);
      }
    }
  }
}

TEST_CASE("rank invariance under invertible factors") {
  std::mt19937_64 rng(3);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 40; ++trial) {
      FMatrix m = random_matrix(rng, q, 5, 4);
      FMatrix a = random_invertible(rng, q, 4);
      FMatrix b = random_invertible(rng, q, 5);
      CHECK(rank(m.mul(a)) == rank(m));
      CHECK(rank(b.mul(m)) == rank(m));
    }
  }
}

TEST_CASE("invert") {
  CHECK(invert(FMatrix::identity(2, 3)) == FMatrix::identity(2, 3));
  FMatrix u = FMatrix::from_string(2, "11/01");
  CHECK(invert(u) == u);
  FMatrix m3 = FMatrix::from_string(3, "11/10");
  CHECK(m3.mul(invert(m3)) == FMatrix::identity(3, 2));
  CHECK_THROWS_AS(invert(FMatrix::from_string(2, "11/11")), cliffcom::SingularMatrix);

  std::mt19937_64 rng(19);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 30; ++trial) {
      FMatrix a = random_invertible(rng, q, 5);
      CHECK(a.mul(invert(a)) == FMatrix::identity(q, 5));
    }
  }
}

TEST_CASE("antisymmetric canonical form, small cases") {
  auto z = antisymmetric_canonical(FMatrix(2, 3, 3));
  CHECK(z.half_rank == 0);
  CHECK(z.transform.matrix == FMatrix::identity(2, 3));

  FMatrix b = FMatrix::from_string(2, "01/10");
  auto c = antisymmetric_canonical(b);
  CHECK(c.half_rank == 1);
  CHECK(c.transform.matrix == FMatrix::identity(2, 2));

  FMatrix g = FMatrix::from_string(2, "011/100/100");
  auto r = antisymmetric_canonical(g);
  CHECK(r.half_rank == 1);
  FMatrix conj = r.transform.matrix.transpose().mul(g).mul(r.transform.matrix);
  FMatrix want(2, 3, 3);
  want.set(0, 1, 1);
  want.set(1, 0, 1);
  CHECK(conj == want);

  CHECK_THROWS_AS(antisymmetric_canonical(FMatrix::identity(2, 2)), cliffcom::BadShape);
}

TEST_CASE("antisymmetric canonical form, randomized") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + int(rng() % 12);
    FMatrix g(2, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int v = int(rng() & 1);
        g.set(i, j, v);
        g.set(j, i, v);
      }
    auto c = antisymmetric_canonical(g);
    FMatrix conj = c.transform.matrix.transpose().mul(g).mul(c.transform.matrix);
    FMatrix want(2, n, n);
    for (int i = 0; i < c.half_rank; ++i) {
      want.set(2 * i, 2 * i + 1, 1);
      want.set(2 * i + 1, 2 * i, 1);
    }
    CHECK(conj == want);
    CHECK(2 * c.half_rank == rank(g));
    CHECK(c.transform.matrix.mul(c.transform.inverse) == FMatrix::identity(2, n));
  }
  // q = 3 antisymmetric
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + int(rng() % 6);
    FMatrix g(3, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int v = int(rng() % 3);
        g.set(i, j, v);
        g.set(j, i, (3 - v) % 3);
      }
    auto c = antisymmetric_canonical(g);
    FMatrix conj = c.transform.matrix.transpose().mul(g).mul(c.transform.matrix);
    FMatrix want(3, n, n);
    for (int i = 0; i < c.half_rank; ++i) {
      want.set(2 * i, 2 * i + 1, 1);
      want.set(2 * i + 1, 2 * i, 2);
    }
    CHECK(conj == want);
    CHECK(2 * c.half_rank == rank(g));
  }
}

TEST_CASE("matrix text encoding round trip") {
  FMatrix m = FMatrix::from_string(2, "10/01");
  CHECK(m == FMatrix::identity(2, 2));
  CHECK(m.to_string() == "10/01");
  FMatrix m3 = FMatrix::from_string(3, "102/210");
  CHECK(m3.to_string() == "102/210");
  CHECK(m3.at(0, 2) == 2);
}

TEST_CASE("biguint arithmetic") {
  BigUint a = BigUint::pow(BigUint(2), 130);
  BigUint b = BigUint::pow(BigUint(2), 65);
  CHECK((a / b).to_string() == BigUint::pow(BigUint(2), 65).to_string());
  CHECK((a % b).is_zero());
  BigUint p(1);
  for (uint64_t i = 1; i <= 25; ++i) p = p * BigUint(i);
  CHECK(p.to_string() == "15511210043330985984000000");
  BigUint q, r;
  BigUint::divmod(p, BigUint(1000000007), q, r);
  CHECK((q * BigUint(1000000007) + r) == p);
  CHECK(BigUint::from_decimal("9845550").to_u64() == 9845550u);
}

TEST_CASE("modulus must be prime") {
  CHECK_THROWS_AS(FMatrix(4, 2, 2), cliffcom::BadShape);
  CHECK_THROWS_AS(FMatrix(1, 2, 2), cliffcom::BadShape);
  CHECK(FMatrix(7, 2, 2).q() == 7);
}
