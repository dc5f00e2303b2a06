#include "cliffcom/pauli.hpp"

#include <cmath>

#include "cliffcom/errors.hpp"

namespace cliffcom::pauli {

std::complex<double> Phase::value() const {
  // tau = exp(i pi (q^2+1)/q); exact values for q = 2 keep qubit phase
  // bookkeeping free of rounding noise
  if (q == 2) {
    static const std::complex<double> i4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return i4[exp & 3];
  }
  double ang = M_PI * double(q * q + 1) * double(exp) / double(q);
  return std::polar(1.0, ang);
}

std::string Phase::to_string() const {
  if (q == 2) {
    static const char *names[4] = {"+1", "+i", "-1", "-i"};
    return names[exp & 3];
  }
  if (exp == 0) return "+1";
  return "t^" + std::to_string(exp);
}

Phase omega_phase(int q, int e) { return Phase(q, 2 * e); }

bool PauliString::is_identity() const {
  for (uint8_t v : b)
    if (v) return false;
  return true;
}

uint64_t PauliString::index() const {
  uint64_t idx = 0;
  for (size_t i = b.size(); i-- > 0;) idx = idx * uint64_t(q) + b[i];
  return idx;
}

PauliString PauliString::from_index(int q, int n, uint64_t idx) {
  PauliString p(q, n);
  for (size_t i = 0; i < p.b.size(); ++i) {
    p.b[i] = uint8_t(idx % uint64_t(q));
    idx /= uint64_t(q);
  }
  return p;
}

std::string PauliString::to_string() const { return format_pauli(*this); }

std::pair<PauliString, Phase> pauli_mul(const PauliString &p, const PauliString &r) {
  if (p.q != r.q || p.n != r.n) throw ShapeMismatch("pauli_mul");
  const int q = p.q;
  PauliString out(q, p.n);
  int eps = 0;
  for (int j = 0; j < p.n; ++j) {
    int x1 = p.x(j), z1 = p.z(j), x2 = r.x(j), z2 = r.z(j);
    int xs = (x1 + x2) % q, zs = (z1 + z2) % q;
    out.set_x(j, xs);
    out.set_z(j, zs);
    eps += x1 * z1 + x2 * z2 - xs * zs + 2 * z1 * x2;
  }
  return {out, Phase(q, eps)};
}

int symplectic(const PauliString &p, const PauliString &r) {
  if (p.q != r.q || p.n != r.n) throw ShapeMismatch("symplectic");
  const int q = p.q;
  int s = 0;
  for (int j = 0; j < p.n; ++j) s += p.z(j) * r.x(j) - p.x(j) * r.z(j);
  s %= q;
  if (s < 0) s += q;
  return s;
}

Phase chi(const PauliString &p, const PauliString &r) { return omega_phase(p.q, symplectic(p, r)); }

AnticommGraph anticomm_graph(std::span<const PauliString> ps, int q_hint) {
  int m = int(ps.size());
  int q = m ? ps[0].q : q_hint;
  for (const auto &p : ps)
    if (p.q != q || p.n != ps[0].n) throw ShapeMismatch("anticomm_graph");
  gf::FMatrix g(q, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) g.set(i, j, symplectic(ps[size_t(i)], ps[size_t(j)]));
  return {g};
}

PauliString PauliTensor::factor(int copy) const {
  PauliString p(q, n);
  for (int i = 0; i < 2 * n; ++i) p.b[size_t(i)] = uint8_t(rows.at(copy, i));
  return p;
}

void PauliTensor::set_factor(int copy, const PauliString &p) {
  for (int i = 0; i < 2 * n; ++i) rows.set(copy, i, p.b[size_t(i)]);
}

uint64_t PauliTensor::index() const {
  uint64_t r = 0;
  uint64_t base = 1;
  for (int c = 0; c < k; ++c) {
    r += factor(c).index() * base;
    for (int j = 0; j < 2 * n; ++j) base *= uint64_t(q);
  }
  return r;
}

PauliTensor PauliTensor::from_index(int q, int n, int k, uint64_t idx) {
  PauliTensor t(q, n, k);
  uint64_t per = 1;
  for (int j = 0; j < 2 * n; ++j) per *= uint64_t(q);
  for (int c = 0; c < k; ++c) {
    t.set_factor(c, PauliString::from_index(q, n, idx % per));
    idx /= per;
  }
  return t;
}

PauliTensor compose_tensor(int n, const gf::FMatrix &v, std::span<const PauliString> paulis, const Phase &phase) {
  if (int(paulis.size()) != v.cols()) throw ShapeMismatch("compose_tensor: column/factor mismatch");
  for (const auto &p : paulis)
    if (p.n != n) throw ShapeMismatch("compose_tensor: factor qudit count");
  const int k = v.rows();
  const int q = v.q();
  PauliTensor t(q, n, k);
  Phase acc(q, 0);
  for (int c = 0; c < k; ++c) {
    PauliString cur(q, n);
    for (int i = 0; i < v.cols(); ++i) {
      int e = v.at(c, i);
      for (int rep = 0; rep < e; ++rep) {
        auto [nxt, ph] = pauli_mul(cur, paulis[size_t(i)]);
        cur = nxt;
        acc = acc.mul(ph);
      }
    }
    t.set_factor(c, cur);
  }
  t.phase = phase.mul(acc);
  t.q = q;
  t.n = n;
  t.k = k;
  return t;
}

TensorDecomposition decompose_tensor(const PauliTensor &t) {
  const int q = t.q, k = t.k, n = t.n;
  // Row-space factorization B = A [X; 0]: column-echelon the transpose.
  gf::FMatrix bt = t.rows.transpose();  // 2n x k
  auto e = gf::column_echelon(bt);
  const int m = e.rank;
  // bt * T = E  =>  rows = T^{-T} E^T; V = first m columns of T^{-T}.
  gf::FMatrix a = e.transform.inverse.transpose();  // k x k
  std::vector<int> first(size_t(m), 0);
  for (int i = 0; i < m; ++i) first[size_t(i)] = i;
  std::vector<int> allk(size_t(k), 0);
  for (int i = 0; i < k; ++i) allk[size_t(i)] = i;
  gf::FMatrix v = a.submatrix(allk, first);  // k x m
  gf::FMatrix x = e.echelon.submatrix_cols(first);  // 2n x m, columns b(P_i)

  // Canonical gauge: reduced column echelon form of V.
  auto ve = gf::column_echelon(v);
  gf::FMatrix v_can = ve.echelon;
  gf::FMatrix bp = x.mul(ve.transform.inverse.transpose());

  TensorDecomposition out;
  out.v = v_can;
  out.paulis.reserve(size_t(m));
  for (int i = 0; i < m; ++i) {
    PauliString p(q, n);
    for (int j = 0; j < 2 * n; ++j) p.b[size_t(j)] = uint8_t(bp.at(j, i));
    out.paulis.push_back(p);
  }
  PauliTensor re = compose_tensor(n, v_can, out.paulis, Phase(q, 0));
  if (!(re.rows == t.rows)) throw ShapeMismatch("decompose_tensor: recomposition mismatch");
  out.phase = t.phase.mul(re.phase.inverse());
  return out;
}

CycleTrace cycle_trace_phase(const PauliTensor &t) {
  PauliString prod(t.q, t.n);
  Phase acc = t.phase;
  for (int c = 0; c < t.k; ++c) {
    auto [nxt, ph] = pauli_mul(prod, t.factor(c));
    prod = nxt;
    acc = acc.mul(ph);
  }
  if (!prod.is_identity()) return {false, Phase(t.q, 0)};
  return {true, acc};
}

std::vector<PauliString> sample_graph_realization(const gf::FMatrix &g, int n) {
  const int q = g.q();
  const int m = g.rows();
  auto can = gf::antisymmetric_canonical(g);
  const int r = can.half_rank;
  if (n < m - r) throw Infeasible("graph needs rank_q(G) >= 2(m - n)");
  // Canonical realization: (Z_i, X_i) pairs then single Z's.
  gf::FMatrix bq(q, 2 * n, m);
  for (int i = 0; i < r; ++i) {
    bq.set(2 * i + 1, 2 * i, 1);      // Z on qudit i
    bq.set(2 * i, 2 * i + 1, 1);      // X on qudit i
  }
  for (int j = 0; j < m - 2 * r; ++j) bq.set(2 * (r + j) + 1, 2 * r + j, 1);  // Z on qudit r+j
  gf::FMatrix bp = bq.mul(can.transform.inverse);
  std::vector<PauliString> out;
  out.reserve(size_t(m));
  for (int i = 0; i < m; ++i) {
    PauliString p(q, n);
    for (int j = 0; j < 2 * n; ++j) p.b[size_t(j)] = uint8_t(bp.at(j, i));
    out.push_back(p);
  }
  auto check = anticomm_graph(out);
  if (!(check.g == g)) throw Infeasible("sample_graph_realization: graph round trip failed");
  return out;
}

std::string format_pauli(const PauliString &p) {
  std::string s;
  if (p.q == 2) {
    for (int j = 0; j < p.n; ++j) {
      int x = p.x(j), z = p.z(j);
      s.push_back(x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return s;
  }
  for (int j = 0; j < p.n; ++j) {
    if (j) s.push_back('.');
    s += "X" + std::to_string(p.x(j)) + "Z" + std::to_string(p.z(j));
  }
  return s;
}

PauliString parse_pauli(int q, const std::string &s) {
  if (q == 2) {
    PauliString p(2, int(s.size()));
    for (int j = 0; j < p.n; ++j) {
      switch (s[size_t(j)]) {
        case 'I': break;
        case 'X': p.set_x(j, 1); break;
        case 'Z': p.set_z(j, 1); break;
        case 'Y': p.set_x(j, 1); p.set_z(j, 1); break;
        default: throw ParseError("bad Pauli letter '" + std::string(1, s[size_t(j)]) + "'");
      }
    }
    return p;
  }
  std::vector<std::pair<int, int>> qudits;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '.') {
      ++i;
      continue;
    }
    if (s[i] != 'X' || i + 1 >= s.size()) throw ParseError("expected X<a>Z<c> block");
    size_t j = i + 1;
    int a = 0;
    while (j < s.size() && isdigit(s[j])) a = a * 10 + (s[j++] - '0');
    if (j >= s.size() || s[j] != 'Z') throw ParseError("expected Z exponent");
    ++j;
    int c = 0;
    while (j < s.size() && isdigit(s[j])) c = c * 10 + (s[j++] - '0');
    qudits.emplace_back(a, c);
    i = j;
  }
  PauliString p(q, int(qudits.size()));
  for (int j = 0; j < p.n; ++j) {
    p.set_x(j, qudits[size_t(j)].first);
    p.set_z(j, qudits[size_t(j)].second);
  }
  return p;
}

std::string format_tensor(const PauliTensor &t) {
  std::string s;
  for (int c = 0; c < t.k; ++c) {
    if (c) s.push_back('|');
    s += format_pauli(t.factor(c));
  }
  return s;
}

PauliTensor parse_tensor(int q, const std::string &s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == '|') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  std::vector<PauliString> factors;
  factors.reserve(parts.size());
  for (const auto &p : parts) factors.push_back(parse_pauli(q, p));
  int n = factors[0].n;
  PauliTensor t(q, n, int(parts.size()));
  for (int c = 0; c < t.k; ++c) {
    if (factors[size_t(c)].n != n) throw ParseError("copies act on different qudit counts");
    t.set_factor(c, factors[size_t(c)]);
  }
  return t;
}

}  // namespace cliffcom::pauli
