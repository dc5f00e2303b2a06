#include "cliffcom/magic.hpp"

#include <cmath>
#include <mutex>

#include "cliffcom/errors.hpp"
#include "cliffcom/linalg.hpp"

namespace cliffcom::magic {

namespace {

void check_qubits(const dense::StateVector &s) {
  if (s.q != 2) throw UnsupportedK("magic measures are implemented for qubits");
}

std::vector<double> pauli_expectations_impl(const dense::StateVector &s, bool parallel) {
  check_qubits(s);
  const int n = s.n;
  const uint64_t np = uint64_t(1) << (2 * n);
  const uint64_t dim = uint64_t(1) << n;
  std::vector<double> t(size_t(np), 0.0);
  const dense::cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t idx = 0; idx < int64_t(np); ++idx) {
    // interleaved bit layout: even positions X, odd positions Z
    uint64_t x = 0, z = 0;
    for (int j = 0; j < n; ++j) {
      x |= ((uint64_t(idx) >> (2 * j)) & 1) << j;
      z |= ((uint64_t(idx) >> (2 * j + 1)) & 1) << j;
    }
    int ny = __builtin_popcountll(x & z);
    dense::cplx acc = 0;
    for (uint64_t m = 0; m < dim; ++m) {
      double sign = (__builtin_popcountll(z & m) & 1) ? -1.0 : 1.0;
      acc += std::conj(s.amps[size_t(m ^ x)]) * sign * s.amps[size_t(m)];
    }
    t[size_t(idx)] = (ipow[ny & 3] * acc).real();
  }
  return t;
}

}  // namespace

std::vector<double> pauli_expectations(const dense::StateVector &s) { return pauli_expectations_impl(s, true); }
std::vector<double> pauli_expectations_serial(const dense::StateVector &s) {
  return pauli_expectations_impl(s, false);
}

double stabilizer_purity(const dense::StateVector &s, int alpha) {
  if (alpha < 2) throw BadShape("stabilizer_purity: alpha >= 2");
  auto t = pauli_expectations(s);
  const double d = double(uint64_t(1) << s.n);
  double sum = 0;
  for (double v : t) sum += std::pow(v, 2 * alpha);
  return sum / d;
}

double stabilizer_entropy(const dense::StateVector &s, int alpha) {
  return std::log2(stabilizer_purity(s, alpha)) / double(1 - alpha);
}

double generalized_purity(const dense::StateVector &s, const mono::Monomial &m) {
  return generalized_purity(s, m, pauli_expectations(s));
}

double generalized_purity(const dense::StateVector &s, const mono::Monomial &m,
                          const std::vector<double> &ptable) {
  check_qubits(s);
  if (m.q != 2) throw UnsupportedK("generalized_purity: qubit monomials only");
  const int n = s.n;
  const int mm = m.m();
  if (mm == 0) return 1.0;
  if (2 * n * mm > 30) throw TooLarge("generalized_purity: tuple space too large");
  const uint64_t np = uint64_t(1) << (2 * n);

  // group equal rows of V; each distinct row contributes one trace factor
  std::vector<uint32_t> row_mask;
  std::vector<int> row_mult;
  for (int r = 0; r < m.k; ++r) {
    uint32_t mask = 0;
    for (int j = 0; j < mm; ++j) mask |= uint32_t(m.V.at(r, j)) << j;
    bool found = false;
    for (size_t u = 0; u < row_mask.size(); ++u)
      if (row_mask[u] == mask) {
        ++row_mult[u];
        found = true;
        break;
      }
    if (!found) {
      row_mask.push_back(mask);
      row_mult.push_back(1);
    }
  }
  std::vector<std::pair<int, int>> phase_pairs;
  for (int i = 0; i < mm; ++i)
    for (int j = i + 1; j < mm; ++j)
      if (m.M.at(i, j)) phase_pairs.emplace_back(i, j);

  const uint64_t tuples = uint64_t(1) << (2 * n * mm);
  const uint64_t kChunks = 256;
  const uint64_t chunk = (tuples + kChunks - 1) / kChunks;
  std::vector<dense::cplx> partial(size_t(kChunks), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int64_t ci = 0; ci < int64_t(kChunks); ++ci) {
    uint64_t lo = uint64_t(ci) * chunk, hi = std::min(tuples, lo + chunk);
    dense::cplx acc = 0;
    std::vector<pauli::PauliString> ps(size_t(mm), pauli::PauliString(2, n));
    for (uint64_t tup = lo; tup < hi; ++tup) {
      uint64_t rest = tup;
      for (int i = 0; i < mm; ++i) {
        ps[size_t(i)] = pauli::PauliString::from_index(2, n, rest % np);
        rest /= np;
      }
      dense::cplx term = 1.0;
      for (size_t u = 0; u < row_mask.size() && term != dense::cplx(0.0); ++u) {
        pauli::PauliString prod(2, n);
        pauli::Phase ph(2, 0);
        uint32_t mask = row_mask[u];
        for (int i = 0; i < mm; ++i) {
          if (!((mask >> i) & 1)) continue;
          auto [nxt, f] = pauli::pauli_mul(prod, ps[size_t(i)]);
          prod = nxt;
          ph = ph.mul(f);
        }
        dense::cplx factor = ph.value() * ptable[size_t(prod.index())];
        dense::cplx powed = 1.0;
        for (int rep = 0; rep < row_mult[u]; ++rep) powed *= factor;
        term *= powed;
      }
      int chi = 0;
      for (auto [i, j] : phase_pairs) chi ^= pauli::symplectic(ps[size_t(i)], ps[size_t(j)]);
      acc += chi ? -term : term;
    }
    partial[size_t(ci)] = acc;
  }
  dense::cplx total = 0;
  for (const auto &p : partial) total += p;
  const double dm = std::pow(2.0, double(n) * mm);
  return (total / dm).real();
}

double generalized_purity_dense(const dense::StateVector &s, const mono::Monomial &m) {
  check_qubits(s);
  dense::DenseOperator om = dense::dense_monomial(m, s.n);
  // <psi^k| Omega |psi^k>
  uint64_t dim = 1;
  for (int c = 0; c < m.k; ++c) dim *= uint64_t(s.dim());
  if (int(dim) != om.dim) throw ShapeMismatch("generalized_purity_dense");
  std::vector<dense::cplx> v(size_t(dim), 0.0);
  uint64_t per = dim;
  for (uint64_t i = 0; i < dim; ++i) {
    dense::cplx a = 1.0;
    uint64_t rest = i;
    per = dim;
    for (int c = 0; c < m.k; ++c) {
      per /= uint64_t(s.dim());
      a *= s.amps[size_t(rest / per)];
      rest %= per;
    }
    v[size_t(i)] = a;
  }
  std::vector<dense::cplx> w = om.apply(v);
  dense::cplx val = 0;
  for (size_t i = 0; i < v.size(); ++i) val += std::conj(v[i]) * w[i];
  return val.real();
}

mono::Monomial omega_monomial(int k, const std::vector<int> &weights) {
  const int mcols = int(weights.size());
  int total = 0;
  for (int w : weights) total += w;
  int overlap = 0;
  if (mcols > 1) {
    if ((total - k) % (mcols - 1) != 0) throw BadShape("omega_monomial: uneven column overlaps");
    overlap = (total - k) / (mcols - 1);
  }
  gf::FMatrix v(2, k, mcols);
  int start = 0;
  for (int j = 0; j < mcols; ++j) {
    for (int r = start; r < start + weights[size_t(j)]; ++r) v.set(r, j, 1);
    start += weights[size_t(j)] - overlap;
  }
  return mono::Monomial(k, 2, v, gf::FMatrix(2, mcols, mcols));
}

double bell_magic(const dense::StateVector &s) {
  return 1.0 - generalized_purity(s, omega_monomial(8, {6, 6}));
}

double bell_magic_q_distribution(const dense::StateVector &s) {
  check_qubits(s);
  const int n = s.n;
  const uint64_t np = uint64_t(1) << (2 * n);
  const double d = double(uint64_t(1) << n);
  auto t = pauli_expectations(s);
  // Q(P) = (1/d^2) sum_Q tr^2(Q psi) |tr(PQ psi)|^2
  std::vector<double> qdist(size_t(np), 0.0);
  for (uint64_t p = 0; p < np; ++p) {
    pauli::PauliString P = pauli::PauliString::from_index(2, n, p);
    double acc = 0;
    for (uint64_t qi = 0; qi < np; ++qi) {
      pauli::PauliString Q = pauli::PauliString::from_index(2, n, qi);
      auto [pq, ph] = pauli::pauli_mul(P, Q);
      double tq = t[size_t(qi)], tr = t[size_t(pq.index())];
      acc += tq * tq * tr * tr;  // |phase| = 1
    }
    qdist[size_t(p)] = acc / (d * d);
  }
  double b = 0;
  for (uint64_t p1 = 0; p1 < np; ++p1) {
    pauli::PauliString P1 = pauli::PauliString::from_index(2, n, p1);
    for (uint64_t p2 = 0; p2 < np; ++p2) {
      pauli::PauliString P2 = pauli::PauliString::from_index(2, n, p2);
      if (pauli::symplectic(P1, P2)) b += 2.0 * qdist[size_t(p1)] * qdist[size_t(p2)];
    }
  }
  return b;
}

double testing_success(const dense::StateVector &s) {
  double delta6 = stabilizer_purity(s, 3);
  return 0.5 + 0.25 * (1.0 - delta6);
}

double triple_purity(const dense::StateVector &s) {
  return generalized_purity(s, omega_monomial(9, {6, 6}));
}

namespace {

// Exact d-exponent histograms for the k=6 permutation-projected Gram system:
// 720^2 tr(Omega_a T_pi Omega_b T_sigma) = sum over (pi, sigma) of d^e and
// 720 tr(Omega_a Pi_sym) likewise. Computed once from the monomial engine.
struct K6Tables {
  std::vector<std::map<int, uint64_t>> pair_hist;    // 4x4 histograms
  std::vector<std::map<int, uint64_t>> single_hist;  // 4 histograms
};

mono::Monomial permute_rows(const mono::Monomial &m, const std::vector<int> &perm) {
  gf::FMatrix v(m.q, m.k, m.m());
  for (int r = 0; r < m.k; ++r)
    for (int j = 0; j < m.m(); ++j) v.set(r, j, m.V.at(perm[size_t(r)], j));
  return mono::Monomial(m.k, m.q, v, m.M);
}

const K6Tables &k6_tables() {
  static K6Tables tables;
  static std::once_flag once;
  std::call_once(once, [] {
    const int k = 6;
    std::vector<mono::Monomial> basis{mono::Monomial::identity(k, 2), omega_monomial(k, {4}),
                                      omega_monomial(k, {6}), omega_monomial(k, {4, 4})};
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(size_t(k), 0);
    for (int i = 0; i < k; ++i) perm[size_t(i)] = i;
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<mono::Monomial> tperm;
    tperm.reserve(perms.size());
    for (const auto &p : perms) tperm.push_back(mono::perm_monomial(k, 2, p));

    // sum over sigma of tr(X T_sigma), memoized on the canonical form of X
    std::map<std::string, std::map<int, uint64_t>> sigma_memo;
    auto sigma_hist = [&](const mono::Monomial &x) -> const std::map<int, uint64_t> & {
      mono::Monomial can = mono::canonical(x);
      auto it = sigma_memo.find(can.key());
      if (it != sigma_memo.end()) return it->second;
      std::map<int, uint64_t> hist;
      for (const auto &ts : tperm) {
        auto prod = mono::multiply(can, ts);
        ++hist[prod.dpower + k - prod.reduced.m()];
      }
      return sigma_memo.emplace(can.key(), std::move(hist)).first->second;
    };

    tables.single_hist.resize(4);
    for (int a = 0; a < 4; ++a) tables.single_hist[size_t(a)] = sigma_hist(basis[size_t(a)]);

    // tr(Omega_a T_pi Omega_b T_sigma) = tr(Omega_a Omega_b^pi T_{pi sigma}),
    // so the sigma sum only depends on the reduced product X_pi
    tables.pair_hist.resize(16);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        std::map<int, uint64_t> hist;
        for (const auto &p : perms) {
          auto x = mono::multiply(basis[size_t(a)], permute_rows(basis[size_t(b)], p));
          for (auto [e, c] : sigma_hist(x.reduced)) hist[e + x.dpower] += c;
        }
        tables.pair_hist[size_t(a) * 4 + b] = hist;
        tables.pair_hist[size_t(b) * 4 + a] = hist;
      }
  });
  return tables;
}

double eval_hist(const std::map<int, uint64_t> &hist, double d) {
  double s = 0;
  for (auto [e, c] : hist) s += double(c) * std::pow(d, e);
  return s;
}

}  // namespace

std::vector<double> state_orbit(const dense::StateVector &s, int k) {
  check_qubits(s);
  const double d = double(uint64_t(1) << s.n);
  if (k == 4) {
    double d4 = stabilizer_purity(s, 2);
    double p = (d + 3.0) * (d - d4) / ((d + 4.0) * (d - 1.0));
    return {p, 1.0 - p};
  }
  if (k == 5) {
    double d4 = stabilizer_purity(s, 2);
    double p = (d + 3.0) * (d + 4.0 - 5.0 * d4) / ((d + 8.0) * (d - 1.0));
    return {p, 1.0 - p};
  }
  if (k == 6) {
    const K6Tables &tab = k6_tables();
    const double f = 720.0;
    std::vector<double> tr_pi(4, 0.0);  // tr(Pi_sym Omega_a)
    for (int a = 0; a < 4; ++a) tr_pi[size_t(a)] = eval_hist(tab.single_hist[size_t(a)], d) / f;
    std::vector<double> smat(16, 0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        smat[size_t(a) * 4 + b] =
            eval_hist(tab.pair_hist[size_t(a) * 4 + b], d) / (f * f * tr_pi[size_t(a)] * tr_pi[size_t(b)]);
    auto ptable = pauli_expectations(s);
    std::vector<double> y(4, 0.0);
    y[0] = 1.0 / tr_pi[0];
    y[1] = generalized_purity(s, omega_monomial(6, {4}), ptable) / tr_pi[1];
    y[2] = generalized_purity(s, omega_monomial(6, {6}), ptable) / tr_pi[2];
    y[3] = generalized_purity(s, omega_monomial(6, {4, 4}), ptable) / tr_pi[3];
    return linalg::solve_real(smat, y, 4);
  }
  throw UnsupportedK("state_orbit supports k in {4, 5, 6}");
}

MagicReport magic_report(const dense::StateVector &s, const std::string &state_name, uint64_t seed) {
  MagicReport rep;
  rep.n = s.n;
  rep.seed = seed;
  rep.state_name = state_name;
  auto ptable = pauli_expectations(s);
  const double d = double(uint64_t(1) << s.n);
  for (int alpha : {2, 3, 4}) {
    double sum = 0;
    for (double v : ptable) sum += std::pow(v, 2 * alpha);
    rep.purities[alpha] = sum / d;
    rep.entropies[alpha] = std::log2(rep.purities[alpha]) / double(1 - alpha);
  }
  rep.generalized["Delta_4,4"] = generalized_purity(s, omega_monomial(6, {4, 4}), ptable);
  rep.generalized["Delta_6,6"] = generalized_purity(s, omega_monomial(8, {6, 6}), ptable);
  if (s.n <= 2) rep.generalized["Delta_triple"] = generalized_purity(s, omega_monomial(9, {6, 6}), ptable);
  rep.bell = 1.0 - rep.generalized["Delta_6,6"];
  rep.p_succ = 0.5 + 0.25 * (1.0 - rep.purities[3]);
  return rep;
}

}  // namespace cliffcom::magic
