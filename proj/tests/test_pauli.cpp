#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "cliffcom/errors.hpp"
#include "cliffcom/pauli.hpp"

using namespace cliffcom;
using namespace cliffcom::pauli;
using cplx = std::complex<double>;

namespace {

// Small dense oracle built in the test itself: canonical Weyl matrix
// W(b) = prod_j tau^{x_j z_j} X^{x_j} Z^{z_j} from first principles.
using Mat = std::vector<std::vector<cplx>>;

Mat matmul(const Mat &a, const Mat &b) {
  size_t n = a.size();
  Mat r(n, std::vector<cplx>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < n; ++l)
      for (size_t j = 0; j < n; ++j) r[i][j] += a[i][l] * b[l][j];
  return r;
}

Mat kron(const Mat &a, const Mat &b) {
  size_t n = a.size(), m = b.size();
  Mat r(n * m, std::vector<cplx>(n * m, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < m; ++k)
        for (size_t l = 0; l < m; ++l) r[i * m + k][j * m + l] = a[i][j] * b[k][l];
  return r;
}

Mat scaled(const Mat &a, cplx s) {
  Mat r = a;
  for (auto &row : r)
    for (auto &v : row) v *= s;
  return r;
}

double max_diff(const Mat &a, const Mat &b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

cplx tau_of(int q) { return std::polar(1.0, M_PI * double(q * q + 1) / double(q)); }

Mat single_weyl(int q, int x, int z) {
  cplx omega = std::polar(1.0, 2.0 * M_PI / double(q));
  Mat xm(size_t(q), std::vector<cplx>(size_t(q), 0.0));
  Mat zm = xm;
  for (int i = 0; i < q; ++i) {
    xm[size_t((i + 1) % q)][size_t(i)] = 1.0;
    zm[size_t(i)][size_t(i)] = std::pow(omega, i);
  }
  Mat r(size_t(q), std::vector<cplx>(size_t(q), 0.0));
  for (int i = 0; i < q; ++i) r[size_t(i)][size_t(i)] = 1.0;
  for (int t = 0; t < x; ++t) r = matmul(r, xm);
  for (int t = 0; t < z; ++t) r = matmul(r, zm);
  return scaled(r, std::pow(tau_of(q), x * z));
}

Mat dense_of(const PauliString &p) {
  Mat r{{1.0}};
  for (int j = 0; j < p.n; ++j) r = kron(r, single_weyl(p.q, p.x(j), p.z(j)));
  return r;
}

PauliString random_pauli(std::mt19937_64 &rng, int q, int n) {
  PauliString p(q, n);
  for (int j = 0; j < n; ++j) {
    p.set_x(j, int(rng() % uint64_t(q)));
    p.set_z(j, int(rng() % uint64_t(q)));
  }
  return p;
}

}  // namespace

TEST_CASE("pauli_mul basics") {
  PauliString x = parse_pauli(2, "X"), z = parse_pauli(2, "Z"), y = parse_pauli(2, "Y");
  PauliString id = parse_pauli(2, "I");

  auto [r1, p1] = pauli_mul(y, id);
  CHECK(r1 == y);
  CHECK(p1.is_one());

  auto [r2, p2] = pauli_mul(x, x);
  CHECK(r2 == id);
  CHECK(p2.is_one());

  auto [r3, p3] = pauli_mul(x, z);
  CHECK(r3 == y);
  CHECK(p3 == Phase(2, 3));  // -i
  CHECK(max_diff(matmul(dense_of(x), dense_of(z)), scaled(dense_of(y), p3.value())) < 1e-12);

  CHECK_THROWS_AS(pauli_mul(x, parse_pauli(2, "XX")), ShapeMismatch);
}

TEST_CASE("pauli_mul agrees with the dense oracle (random pairs)") {
  std::mt19937_64 rng(5);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 200; ++trial) {
      int n = 1 + int(rng() % 2);
      PauliString a = random_pauli(rng, q, n), b = random_pauli(rng, q, n);
      auto [r, ph] = pauli_mul(a, b);
      CHECK(max_diff(matmul(dense_of(a), dense_of(b)), scaled(dense_of(r), ph.value())) < 1e-10);
    }
  }
}

TEST_CASE("pauli_mul associativity with exact phase composition") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + int(rng() % 2);
    PauliString a = random_pauli(rng, 2, n), b = random_pauli(rng, 2, n), c = random_pauli(rng, 2, n);
    auto [ab, p_ab] = pauli_mul(a, b);
    auto [ab_c, p_ab_c] = pauli_mul(ab, c);
    auto [bc, p_bc] = pauli_mul(b, c);
    auto [a_bc, p_a_bc] = pauli_mul(a, bc);
    CHECK(ab_c == a_bc);
    CHECK(p_ab.mul(p_ab_c) == p_bc.mul(p_a_bc));
  }
}

TEST_CASE("chi values and multiplicativity") {
  PauliString x = parse_pauli(2, "X"), z = parse_pauli(2, "Z");
  CHECK(std::abs(chi(x, z).value() - cplx(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(chi(parse_pauli(2, "XZ"), parse_pauli(2, "ZX")).value() - cplx(1.0, 0.0)) < 1e-12);
  CHECK(chi(parse_pauli(2, "YZ"), parse_pauli(2, "II")).is_one());

  std::mt19937_64 rng(7);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 1000; ++trial) {
      int n = 1 + int(rng() % 2);
      PauliString p = random_pauli(rng, q, n), a = random_pauli(rng, q, n), b = random_pauli(rng, q, n);
      auto [ab, ph] = pauli_mul(a, b);
      CHECK(chi(p, ab) == chi(p, a).mul(chi(p, b)));
    }
  }
}

TEST_CASE("anticommutation graph") {
  std::vector<PauliString> xz{parse_pauli(2, "X"), parse_pauli(2, "Z")};
  auto g = anticomm_graph(xz);
  CHECK(g.g == gf::FMatrix::from_string(2, "01/10"));

  std::vector<PauliString> three{parse_pauli(2, "XI"), parse_pauli(2, "ZI"), parse_pauli(2, "IZ")};
  auto g3 = anticomm_graph(three);
  CHECK(g3.g == gf::FMatrix::from_string(2, "010/100/000"));

  std::vector<PauliString> none;
  CHECK(anticomm_graph(none).g.rows() == 0);
}

TEST_CASE("decompose_tensor named cases") {
  PauliTensor xxxx = parse_tensor(2, "X|X|X|X");
  auto d = decompose_tensor(xxxx);
  CHECK(d.v.to_string() == "1/1/1/1");
  CHECK(d.paulis.size() == 1);
  CHECK(d.paulis[0] == parse_pauli(2, "X"));
  CHECK(d.phase.is_one());

  PauliTensor id = parse_tensor(2, "I|I|I");
  CHECK(decompose_tensor(id).v.cols() == 0);

  PauliTensor yxzi = parse_tensor(2, "Y|X|Z|I");
  auto d2 = decompose_tensor(yxzi);
  PauliTensor re = compose_tensor(1, d2.v, d2.paulis, d2.phase);
  CHECK(re == yxzi);
  CHECK(gf::rank(d2.v) == d2.v.cols());
}

TEST_CASE("decompose/recompose round trip, 1000 random tensors") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + int(rng() % 3);
    int k = 1 + int(rng() % 8);
    PauliTensor t(2, n, k);
    for (int c = 0; c < k; ++c) t.set_factor(c, random_pauli(rng, 2, n));
    t.phase = Phase(2, int(rng() % 4));
    auto d = decompose_tensor(t);
    CHECK(compose_tensor(n, d.v, d.paulis, d.phase) == t);
    // canonical gauge: V in reduced column echelon form
    auto ech = gf::column_echelon(d.v);
    CHECK(ech.echelon == d.v);
  }
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + int(rng() % 2);
    int k = 1 + int(rng() % 5);
    PauliTensor t(3, n, k);
    for (int c = 0; c < k; ++c) t.set_factor(c, random_pauli(rng, 3, n));
    t.phase = Phase(3, int(rng() % 6));
    auto d = decompose_tensor(t);
    CHECK(compose_tensor(n, d.v, d.paulis, d.phase) == t);
  }
}

TEST_CASE("cycle trace phase") {
  for (const char *s : {"X|X|X|X", "Y|Y|Y|Y", "Z|Z|Z|Z"}) {
    auto ct = cycle_trace_phase(parse_tensor(2, s));
    CHECK(ct.nonzero);
    CHECK(ct.phase.is_one());
  }
  CHECK(!cycle_trace_phase(parse_tensor(2, "X|X|X|I")).nonzero);
  // tr(X Y) = 0, and  X Y Z = iXX Z... product phase check: X*Y = iZ, (X*Y)*Z = i
  auto ct = cycle_trace_phase(parse_tensor(2, "X|Y|Z"));
  CHECK(ct.nonzero);
  CHECK(ct.phase == Phase(2, 1));
}

TEST_CASE("sample_graph_realization") {
  {
    auto ps = sample_graph_realization(gf::FMatrix(2, 1, 1), 1);
    CHECK(ps.size() == 1);
    CHECK(!ps[0].is_identity());
  }
  {
    auto ps = sample_graph_realization(gf::FMatrix::from_string(2, "01/10"), 1);
    CHECK(ps.size() == 2);
    CHECK(symplectic(ps[0], ps[1]) == 1);
  }
  {
    gf::FMatrix g = gf::FMatrix::from_string(2, "010/100/000");
    auto ps = sample_graph_realization(g, 2);
    CHECK(anticomm_graph(ps).g == g);
  }
  {
    // infeasible: 3 pairwise-commuting independent Paulis need 3 qubits... on 1 qubit
    gf::FMatrix g(2, 3, 3);
    CHECK_THROWS_AS(sample_graph_realization(g, 1), Infeasible);
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + int(rng() % 5);
    int n = 1 + int(rng() % 3);
    gf::FMatrix g(2, m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        int v = int(rng() & 1);
        g.set(i, j, v);
        g.set(j, i, v);
      }
    int r = gf::rank(g) / 2;
    if (r < m - n) continue;
    auto ps = sample_graph_realization(g, n);
    CHECK(anticomm_graph(ps).g == g);
    gf::FMatrix bp(2, 2 * n, m);
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < 2 * n; ++i) bp.set(i, c, ps[size_t(c)].b[size_t(i)]);
    CHECK(gf::rank(bp) == m);
  }
}

TEST_CASE("pauli literal round trips") {
  CHECK(format_tensor(parse_tensor(2, "XX|ZI|YY")) == "XX|ZI|YY");
  PauliTensor t = parse_tensor(2, "XX|ZI|YY");
  CHECK(t.k == 3);
  CHECK(t.n == 2);
  CHECK(format_pauli(parse_pauli(3, "X1Z2.X0Z1")) == "X1Z2.X0Z1");
}

TEST_CASE("pauli index round trip") {
  std::mt19937_64 rng(10);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      int n = 1 + int(rng() % 2), k = 1 + int(rng() % 3);
      PauliTensor t(q, n, k);
      for (int c = 0; c < k; ++c) t.set_factor(c, random_pauli(rng, q, n));
      CHECK(PauliTensor::from_index(q, n, k, t.index()).rows == t.rows);
    }
  }
}
