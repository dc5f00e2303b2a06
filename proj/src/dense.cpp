#include "cliffcom/dense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "cliffcom/errors.hpp"
#include "cliffcom/linalg.hpp"

namespace cliffcom::dense {

namespace {

int g_dense_cap = -1;

uint64_t ipow(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

int dense_cap() {
  if (g_dense_cap < 0) {
    const char *env = std::getenv("COMMUTANT_DENSE_CAP");
    g_dense_cap = env ? std::atoi(env) : 4096;
    if (g_dense_cap <= 0) g_dense_cap = 4096;
  }
  return g_dense_cap;
}

void set_dense_cap(int cap) { g_dense_cap = cap; }

static void guard_dim(uint64_t dim) {
  if (dim > uint64_t(dense_cap()))
    throw TooLarge("dimension " + std::to_string(dim) + " exceeds the dense cap " + std::to_string(dense_cap()));
}

DenseOperator DenseOperator::identity(int dim, int n, int k, int q) {
  DenseOperator o(dim, n, k, q);
  for (int i = 0; i < dim; ++i) o.at(i, i) = 1.0;
  return o;
}

DenseOperator DenseOperator::mul(const DenseOperator &o) const {
  if (dim != o.dim) throw ShapeMismatch("DenseOperator::mul");
  DenseOperator r(dim, n, k, q);
  for (int i = 0; i < dim; ++i)
    for (int l = 0; l < dim; ++l) {
      cplx v = at(i, l);
      if (v == cplx(0.0)) continue;
      const cplx *src = &o.a[size_t(l) * dim];
      cplx *dst = &r.a[size_t(i) * dim];
      for (int j = 0; j < dim; ++j) dst[j] += v * src[j];
    }
  return r;
}

DenseOperator DenseOperator::add(const DenseOperator &o) const {
  if (dim != o.dim) throw ShapeMismatch("DenseOperator::add");
  DenseOperator r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
  return r;
}

DenseOperator DenseOperator::sub(const DenseOperator &o) const {
  if (dim != o.dim) throw ShapeMismatch("DenseOperator::sub");
  DenseOperator r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
  return r;
}

DenseOperator DenseOperator::scaled(cplx s) const {
  DenseOperator r = *this;
  for (auto &v : r.a) v *= s;
  return r;
}

DenseOperator DenseOperator::dagger() const {
  DenseOperator r(dim, n, k, q);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

DenseOperator DenseOperator::kron(const DenseOperator &o) const {
  uint64_t nd = uint64_t(dim) * uint64_t(o.dim);
  guard_dim(nd);
  DenseOperator r(int(nd), n + o.n, k, q);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      cplx v = at(i, j);
      if (v == cplx(0.0)) continue;
      for (int p = 0; p < o.dim; ++p)
        for (int s = 0; s < o.dim; ++s) r.at(i * o.dim + p, j * o.dim + s) = v * o.at(p, s);
    }
  return r;
}

cplx DenseOperator::trace() const {
  cplx t = 0;
  for (int i = 0; i < dim; ++i) t += at(i, i);
  return t;
}

double DenseOperator::max_abs() const {
  double m = 0;
  for (const auto &v : a) m = std::max(m, std::abs(v));
  return m;
}

double DenseOperator::max_abs_diff(const DenseOperator &o) const {
  if (dim != o.dim) throw ShapeMismatch("max_abs_diff");
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
  return m;
}

double DenseOperator::hermiticity_defect() const {
  double m = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
  return m;
}

bool DenseOperator::is_unitary(double tol) const {
  DenseOperator p = mul(dagger());
  for (int i = 0; i < dim; ++i) p.at(i, i) -= 1.0;
  return p.max_abs() <= tol;
}

std::vector<cplx> DenseOperator::apply(const std::vector<cplx> &v) const {
  if (int(v.size()) != dim) throw ShapeMismatch("DenseOperator::apply");
  std::vector<cplx> r(size_t(dim), 0.0);
  for (int i = 0; i < dim; ++i) {
    cplx s = 0;
    const cplx *row = &a[size_t(i) * dim];
    for (int j = 0; j < dim; ++j) s += row[j] * v[size_t(j)];
    r[size_t(i)] = s;
  }
  return r;
}

void StateVector::normalize() {
  double s = 0;
  for (const auto &v : amps) s += std::norm(v);
  s = std::sqrt(s);
  for (auto &v : amps) v /= s;
}

StateVector zero_state(int n, int q) {
  StateVector s;
  s.n = n;
  s.q = q;
  s.amps.assign(ipow(uint64_t(q), n), 0.0);
  s.amps[0] = 1.0;
  return s;
}

StateVector t_state(int n) {
  StateVector s;
  s.n = n;
  s.q = 2;
  s.amps = {1.0};
  const cplx e8 = std::polar(1.0, M_PI / 4.0);
  for (int i = 0; i < n; ++i) {
    std::vector<cplx> next(s.amps.size() * 2);
    for (size_t j = 0; j < s.amps.size(); ++j) {
      next[2 * j] = s.amps[j] / std::sqrt(2.0);
      next[2 * j + 1] = s.amps[j] * e8 / std::sqrt(2.0);
    }
    s.amps = std::move(next);
  }
  return s;
}

StateVector random_state(int n, uint64_t seed, int q) {
  StateVector s;
  s.n = n;
  s.q = q;
  uint64_t dim = ipow(uint64_t(q), n);
  s.amps.resize(dim);
  // splitmix-style stream + Box-Muller; avoids implementation-defined
  // std::distribution sequences so seeds give identical states everywhere
  uint64_t x = seed + 0x9e3779b97f4a7c15ULL;
  auto next = [&x]() {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  auto uniform = [&]() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; };
  for (auto &v : s.amps) {
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    v = cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
  }
  s.normalize();
  return s;
}

DenseOperator projector(const StateVector &s, int k) {
  uint64_t dim = 1;
  for (int c = 0; c < k; ++c) dim *= uint64_t(s.dim());
  guard_dim(dim);
  std::vector<cplx> amp(size_t(dim), cplx(0.0));
  for (uint64_t i = 0; i < dim; ++i) {
    cplx v = 1.0;
    uint64_t rest = i;
    uint64_t per = dim;
    for (int c = 0; c < k; ++c) {
      per /= uint64_t(s.dim());
      v *= s.amps[size_t(rest / per)];
      rest %= per;
    }
    amp[size_t(i)] = v;
  }
  DenseOperator o(int(dim), s.n, k, s.q);
  for (uint64_t i = 0; i < dim; ++i)
    for (uint64_t j = 0; j < dim; ++j) o.at(int(i), int(j)) = amp[size_t(i)] * std::conj(amp[size_t(j)]);
  return o;
}

namespace {

// Signed-permutation form of a Weyl tensor: column c maps to row row_of[c]
// with amplitude tau^{exp_of[c]} times the tensor's own phase.
struct PauliAction {
  int dim = 0;
  int two_q = 4;
  std::vector<int> row_of;
  std::vector<int> exp_of;  // tau exponents mod 2q
};

PauliAction pauli_action(const pauli::PauliTensor &t) {
  const int q = t.q;
  const int slots = t.n * t.k;
  uint64_t dim = ipow(uint64_t(q), slots);
  guard_dim(dim);
  PauliAction act;
  act.dim = int(dim);
  act.two_q = 2 * q;
  act.row_of.resize(size_t(dim));
  act.exp_of.resize(size_t(dim));
  // slot p = c*n + j has stride q^{slots-1-p}
  std::vector<int> xs(size_t(slots), 0), zs(size_t(slots), 0);
  for (int c = 0; c < t.k; ++c)
    for (int j = 0; j < t.n; ++j) {
      xs[size_t(c * t.n + j)] = t.rows.at(c, 2 * j);
      zs[size_t(c * t.n + j)] = t.rows.at(c, 2 * j + 1);
    }
  int base_exp = t.phase.exp;
  for (int p = 0; p < slots; ++p) base_exp += xs[size_t(p)] * zs[size_t(p)];
  std::vector<int> digits(size_t(slots), 0);
  for (uint64_t col = 0; col < dim; ++col) {
    int e = base_exp;
    uint64_t row = 0;
    for (int p = 0; p < slots; ++p) {
      int m = digits[size_t(p)];
      e += 2 * zs[size_t(p)] * m;
      row = row * uint64_t(q) + uint64_t((m + xs[size_t(p)]) % q);
    }
    act.row_of[size_t(col)] = int(row);
    act.exp_of[size_t(col)] = e % (2 * q);
    for (int p = slots - 1; p >= 0; --p) {
      if (++digits[size_t(p)] < q) break;
      digits[size_t(p)] = 0;
    }
  }
  return act;
}

std::vector<cplx> tau_table(int q) {
  std::vector<cplx> t(size_t(2 * q), cplx(0.0));
  for (int e = 0; e < 2 * q; ++e) t[size_t(e)] = pauli::Phase(q, e).value();
  return t;
}

void add_pauli_scaled(DenseOperator &out, const PauliAction &act, const std::vector<cplx> &taus, cplx coeff) {
  for (int col = 0; col < act.dim; ++col)
    out.at(act.row_of[size_t(col)], col) += coeff * taus[size_t(act.exp_of[size_t(col)])];
}

cplx pauli_dagger_dot(const PauliAction &act, const std::vector<cplx> &taus, const DenseOperator &o) {
  // tr(W^dag O) = sum_col conj(W[row,col]) O[row,col]
  cplx s = 0;
  for (int col = 0; col < act.dim; ++col)
    s += std::conj(taus[size_t(act.exp_of[size_t(col)])]) * o.at(act.row_of[size_t(col)], col);
  return s;
}

}  // namespace

DenseOperator dense_pauli(const pauli::PauliString &p) {
  pauli::PauliTensor t(p.q, p.n, 1);
  t.set_factor(0, p);
  return dense_pauli(t);
}

DenseOperator dense_pauli(const pauli::PauliTensor &t) {
  PauliAction act = pauli_action(t);
  DenseOperator o(act.dim, t.n, t.k, t.q);
  add_pauli_scaled(o, act, tau_table(t.q), 1.0);
  return o;
}

void accumulate_pauli(DenseOperator &out, const pauli::PauliTensor &t, cplx coeff) {
  PauliAction act = pauli_action(t);
  if (act.dim != out.dim) throw ShapeMismatch("accumulate_pauli");
  add_pauli_scaled(out, act, tau_table(t.q), coeff);
}

DenseOperator dense_monomial(const mono::Monomial &m, int n) {
  const int q = m.q;
  uint64_t wdim = ipow(uint64_t(q), m.k);
  guard_dim(wdim);
  guard_dim(ipow(wdim, n));
  DenseOperator omega(int(wdim), 1, m.k, q);
  const auto taus = tau_table(q);
  const int mm = m.m();
  const uint64_t tuples = ipow(uint64_t(q) * uint64_t(q), mm);
  std::vector<pauli::PauliString> ps(size_t(mm), pauli::PauliString(q, 1));
  const double norm = 1.0 / double(ipow(uint64_t(q), mm));
  for (uint64_t tup = 0; tup < tuples; ++tup) {
    uint64_t rest = tup;
    for (int i = 0; i < mm; ++i) {
      ps[size_t(i)] = pauli::PauliString::from_index(q, 1, rest % uint64_t(q * q));
      rest /= uint64_t(q * q);
    }
    pauli::PauliTensor t = pauli::compose_tensor(1, m.V, ps, pauli::Phase(q, 0));
    int chi_exp = 0;
    for (int i = 0; i < mm; ++i)
      for (int j = i + 1; j < mm; ++j)
        if (m.M.at(i, j)) chi_exp += 2 * m.M.at(i, j) * pauli::symplectic(ps[size_t(i)], ps[size_t(j)]);
    pauli::PauliTensor bare = t;
    bare.phase = pauli::Phase(q, 0);
    PauliAction act = pauli_action(bare);
    cplx coeff = norm * t.phase.mul(pauli::Phase(q, chi_exp)).value();
    add_pauli_scaled(omega, act, taus, coeff);
  }
  if (n == 1) {
    omega.n = 1;
    return omega;
  }
  // n-fold tensor power assembled in the copy-major slot layout: qudit j of
  // copy c sits at slot c*n + j, while omega's slots are the k copies of one
  // qudit. full(row, col) = prod_j omega(row_j, col_j).
  uint64_t dim = ipow(uint64_t(q), n * m.k);
  guard_dim(dim);
  const int slots = n * m.k;
  std::vector<uint32_t> sub(size_t(dim) * size_t(n), 0);
  {
    std::vector<int> digits(size_t(slots), 0);
    for (uint64_t idx = 0; idx < dim; ++idx) {
      for (int j = 0; j < n; ++j) {
        uint32_t s = 0;
        for (int c = 0; c < m.k; ++c) s = s * uint32_t(q) + uint32_t(digits[size_t(c * n + j)]);
        sub[size_t(idx) * n + j] = s;
      }
      for (int p = slots - 1; p >= 0; --p) {
        if (++digits[size_t(p)] < q) break;
        digits[size_t(p)] = 0;
      }
    }
  }
  DenseOperator full(int(dim), n, m.k, q);
  for (uint64_t r = 0; r < dim; ++r)
    for (uint64_t c = 0; c < dim; ++c) {
      cplx v = 1.0;
      for (int j = 0; j < n && v != cplx(0.0); ++j)
        v *= omega.at(int(sub[size_t(r) * n + j]), int(sub[size_t(c) * n + j]));
      full.at(int(r), int(c)) = v;
    }
  return full;
}

DenseOperator dense_monomial_direct(const mono::Monomial &m, int n) {
  const int q = m.q;
  const int mm = m.m();
  uint64_t dim = ipow(uint64_t(q), n * m.k);
  guard_dim(dim);
  uint64_t per = ipow(uint64_t(q), 2 * n);
  uint64_t tuples = ipow(per, mm);
  DenseOperator out(int(dim), n, m.k, q);
  const auto taus = tau_table(q);
  const double norm = 1.0 / double(ipow(uint64_t(q), uint64_t(n) * mm));
  std::vector<pauli::PauliString> ps(size_t(mm), pauli::PauliString(q, n));
  for (uint64_t tup = 0; tup < tuples; ++tup) {
    uint64_t rest = tup;
    for (int i = 0; i < mm; ++i) {
      ps[size_t(i)] = pauli::PauliString::from_index(q, n, rest % per);
      rest /= per;
    }
    pauli::PauliTensor t = pauli::compose_tensor(n, m.V, ps, pauli::Phase(q, 0));
    int chi_exp = 0;
    for (int i = 0; i < mm; ++i)
      for (int j = i + 1; j < mm; ++j)
        if (m.M.at(i, j)) chi_exp += 2 * m.M.at(i, j) * pauli::symplectic(ps[size_t(i)], ps[size_t(j)]);
    pauli::PauliTensor bare = t;
    bare.phase = pauli::Phase(q, 0);
    PauliAction act = pauli_action(bare);
    cplx coeff = norm * t.phase.mul(pauli::Phase(q, chi_exp)).value();
    add_pauli_scaled(out, act, taus, coeff);
  }
  return out;
}

DenseOperator permutation_op(const std::vector<int> &perm, int n, int q) {
  const int k = int(perm.size());
  uint64_t dim = ipow(uint64_t(q), n * k);
  guard_dim(dim);
  std::vector<int> pinv(size_t(k), 0);
  for (int i = 0; i < k; ++i) pinv[size_t(perm[size_t(i)])] = i;
  uint64_t block = ipow(uint64_t(q), n);
  DenseOperator o(int(dim), n, k, q);
  std::vector<uint64_t> digits(size_t(k), 0);
  for (uint64_t col = 0; col < dim; ++col) {
    uint64_t rest = col;
    for (int c = k - 1; c >= 0; --c) {
      digits[size_t(c)] = rest % block;
      rest /= block;
    }
    uint64_t row = 0;
    for (int c = 0; c < k; ++c) row = row * block + digits[size_t(pinv[size_t(c)])];
    o.at(int(row), int(col)) = 1.0;
  }
  return o;
}

DenseOperator sym_projector(int k, int n, int q) {
  std::vector<int> perm(size_t(k), 0);
  std::iota(perm.begin(), perm.end(), 0);
  uint64_t dim = ipow(uint64_t(q), n * k);
  guard_dim(dim);
  DenseOperator acc(int(dim), n, k, q);
  uint64_t cnt = 0;
  do {
    acc = acc.add(permutation_op(perm, n, q));
    ++cnt;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc.scaled(1.0 / double(cnt));
}

std::vector<GateSpec> clifford_generator_specs(int n, int q) {
  std::vector<GateSpec> gens;
  auto push1 = [&](int a, std::vector<cplx> u, const std::string &name) {
    GateSpec g;
    g.kind = GateSpec::Kind::OneQudit;
    g.a = a;
    g.u = std::move(u);
    g.name = name + std::to_string(a);
    gens.push_back(std::move(g));
  };
  if (q == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < n; ++a) {
      push1(a, {r, r, r, -r}, "H");
      push1(a, {1.0, 0.0, 0.0, cplx(0.0, 1.0)}, "S");
    }
    for (int a = 0; a + 1 < n; ++a) {
      GateSpec g;
      g.kind = GateSpec::Kind::TwoQudit;
      g.a = a;
      g.b = a + 1;
      g.u.assign(16, 0.0);
      for (int i = 0; i < 4; ++i) g.u[size_t(i) * 4 + i] = (i == 3) ? -1.0 : 1.0;
      g.name = "CZ" + std::to_string(a) + std::to_string(a + 1);
      gens.push_back(std::move(g));
    }
    return gens;
  }
  const cplx omega = std::polar(1.0, 2.0 * M_PI / double(q));
  const cplx tau = std::polar(1.0, M_PI * double(q * q + 1) / double(q));
  for (int a = 0; a < n; ++a) {
    std::vector<cplx> f(size_t(q) * q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) f[size_t(i) * q + j] = std::pow(omega, i * j) / std::sqrt(double(q));
    push1(a, f, "F");
    std::vector<cplx> p(size_t(q) * q, 0.0);
    for (int j = 0; j < q; ++j) p[size_t(j) * q + j] = std::pow(tau, j * j);
    push1(a, p, "P");
  }
  for (int a = 0; a + 1 < n; ++a) {
    GateSpec g;
    g.kind = GateSpec::Kind::TwoQudit;
    g.a = a;
    g.b = a + 1;
    g.u.assign(size_t(q) * q * q * q, 0.0);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        int in = i * q + j;
        int out = i * q + (i + j) % q;
        g.u[size_t(out) * q * q + in] = 1.0;
      }
    g.name = "SUM" + std::to_string(a) + std::to_string(a + 1);
    gens.push_back(std::move(g));
  }
  return gens;
}

namespace {

DenseOperator gate_dense(const GateSpec &g, int n, int q) {
  uint64_t dim = ipow(uint64_t(q), n);
  guard_dim(dim);
  DenseOperator o(int(dim), n, 1, q);
  if (g.kind == GateSpec::Kind::OneQudit) {
    uint64_t stride = ipow(uint64_t(q), n - 1 - g.a);
    uint64_t outer = dim / (stride * uint64_t(q));
    for (uint64_t hi = 0; hi < outer; ++hi)
      for (uint64_t lo = 0; lo < stride; ++lo)
        for (int r = 0; r < q; ++r)
          for (int c = 0; c < q; ++c) {
            cplx v = g.u[size_t(r) * q + c];
            if (v == cplx(0.0)) continue;
            uint64_t row = (hi * uint64_t(q) + uint64_t(r)) * stride + lo;
            uint64_t col = (hi * uint64_t(q) + uint64_t(c)) * stride + lo;
            o.at(int(row), int(col)) = v;
          }
    return o;
  }
  // general two-qudit embedding by digit surgery
  std::vector<uint64_t> strides(size_t(n), 0);
  for (int p = 0; p < n; ++p) strides[size_t(p)] = ipow(uint64_t(q), n - 1 - p);
  for (uint64_t col = 0; col < dim; ++col) {
    int da = int(col / strides[size_t(g.a)] % uint64_t(q));
    int db = int(col / strides[size_t(g.b)] % uint64_t(q));
    uint64_t base = col - uint64_t(da) * strides[size_t(g.a)] - uint64_t(db) * strides[size_t(g.b)];
    int in = da * q + db;
    for (int out = 0; out < q * q; ++out) {
      cplx v = g.u[size_t(out) * q * q + in];
      if (v == cplx(0.0)) continue;
      uint64_t row = base + uint64_t(out / q) * strides[size_t(g.a)] + uint64_t(out % q) * strides[size_t(g.b)];
      o.at(int(row), int(col)) += v;
    }
  }
  return o;
}

void apply_left_1q(DenseOperator &o, const std::vector<cplx> &u, int pos, int slots, int q) {
  uint64_t stride = ipow(uint64_t(q), slots - 1 - pos);
  uint64_t outer = uint64_t(o.dim) / (stride * uint64_t(q));
  std::vector<cplx> tmp(size_t(q), cplx(0.0));
  for (uint64_t hi = 0; hi < outer; ++hi)
    for (uint64_t lo = 0; lo < stride; ++lo)
      for (int col = 0; col < o.dim; ++col) {
        for (int d = 0; d < q; ++d) tmp[size_t(d)] = o.at(int((hi * q + uint64_t(d)) * stride + lo), col);
        for (int d = 0; d < q; ++d) {
          cplx s = 0;
          for (int e = 0; e < q; ++e) s += u[size_t(d) * q + e] * tmp[size_t(e)];
          o.at(int((hi * q + uint64_t(d)) * stride + lo), col) = s;
        }
      }
}

void apply_right_1q_dagger(DenseOperator &o, const std::vector<cplx> &u, int pos, int slots, int q) {
  // O <- O (I x u^dag x I)
  uint64_t stride = ipow(uint64_t(q), slots - 1 - pos);
  uint64_t outer = uint64_t(o.dim) / (stride * uint64_t(q));
  std::vector<cplx> tmp(size_t(q), cplx(0.0));
  for (int row = 0; row < o.dim; ++row)
    for (uint64_t hi = 0; hi < outer; ++hi)
      for (uint64_t lo = 0; lo < stride; ++lo) {
        for (int d = 0; d < q; ++d) tmp[size_t(d)] = o.at(row, int((hi * q + uint64_t(d)) * stride + lo));
        for (int d = 0; d < q; ++d) {
          cplx s = 0;
          for (int e = 0; e < q; ++e) s += tmp[size_t(e)] * std::conj(u[size_t(d) * q + e]);
          o.at(row, int((hi * q + uint64_t(d)) * stride + lo)) = s;
        }
      }
}

void apply_left_2q(DenseOperator &o, const std::vector<cplx> &u, int pa, int pb, int slots, int q) {
  uint64_t sa = ipow(uint64_t(q), slots - 1 - pa);
  uint64_t sb = ipow(uint64_t(q), slots - 1 - pb);
  std::vector<cplx> tmp(size_t(q) * q);
  std::vector<int> rows(size_t(q) * q);
  for (int col = 0; col < o.dim; ++col) {
    // visit each (da, db) fiber exactly once
    for (uint64_t base = 0; base < uint64_t(o.dim); ++base) {
      if (base / sa % uint64_t(q) || base / sb % uint64_t(q)) continue;
      for (int da = 0; da < q; ++da)
        for (int db = 0; db < q; ++db) {
          rows[size_t(da * q + db)] = int(base + uint64_t(da) * sa + uint64_t(db) * sb);
          tmp[size_t(da * q + db)] = o.at(rows[size_t(da * q + db)], col);
        }
      for (int out = 0; out < q * q; ++out) {
        cplx s = 0;
        for (int in = 0; in < q * q; ++in) s += u[size_t(out) * q * q + in] * tmp[size_t(in)];
        o.at(rows[size_t(out)], col) = s;
      }
    }
  }
}

void apply_right_2q_dagger(DenseOperator &o, const std::vector<cplx> &u, int pa, int pb, int slots, int q) {
  uint64_t sa = ipow(uint64_t(q), slots - 1 - pa);
  uint64_t sb = ipow(uint64_t(q), slots - 1 - pb);
  std::vector<cplx> tmp(size_t(q) * q);
  std::vector<int> cols(size_t(q) * q);
  for (int row = 0; row < o.dim; ++row) {
    for (uint64_t base = 0; base < uint64_t(o.dim); ++base) {
      if (base / sa % uint64_t(q) || base / sb % uint64_t(q)) continue;
      for (int da = 0; da < q; ++da)
        for (int db = 0; db < q; ++db) {
          cols[size_t(da * q + db)] = int(base + uint64_t(da) * sa + uint64_t(db) * sb);
          tmp[size_t(da * q + db)] = o.at(row, cols[size_t(da * q + db)]);
        }
      for (int out = 0; out < q * q; ++out) {
        cplx s = 0;
        for (int in = 0; in < q * q; ++in) s += tmp[size_t(in)] * std::conj(u[size_t(out) * q * q + in]);
        o.at(row, cols[size_t(out)]) = s;
      }
    }
  }
}

}  // namespace

std::vector<DenseOperator> clifford_generators(int n, int q) {
  std::vector<DenseOperator> out;
  for (const auto &g : clifford_generator_specs(n, q)) out.push_back(gate_dense(g, n, q));
  return out;
}

DenseOperator conjugate_kfold(const DenseOperator &o, const GateSpec &g, int n, int k, int q) {
  DenseOperator r = o;
  const int slots = n * k;
  for (int c = 0; c < k; ++c) {
    if (g.kind == GateSpec::Kind::OneQudit) {
      apply_left_1q(r, g.u, c * n + g.a, slots, q);
    } else {
      apply_left_2q(r, g.u, c * n + g.a, c * n + g.b, slots, q);
    }
  }
  for (int c = 0; c < k; ++c) {
    if (g.kind == GateSpec::Kind::OneQudit) {
      apply_right_1q_dagger(r, g.u, c * n + g.a, slots, q);
    } else {
      apply_right_2q_dagger(r, g.u, c * n + g.a, c * n + g.b, slots, q);
    }
  }
  return r;
}

double clifford_commutation_residual(const DenseOperator &o) {
  double worst = 0;
  for (const auto &g : clifford_generator_specs(o.n, o.q)) {
    DenseOperator c = conjugate_kfold(o, g, o.n, o.k, o.q);
    worst = std::max(worst, c.max_abs_diff(o));
  }
  return worst;
}

bool commutes_with_clifford(const DenseOperator &o, double tol) {
  return clifford_commutation_residual(o) <= tol;
}

DecodedPauli dense_to_pauli(const DenseOperator &o, double tol) {
  const int q = o.q;
  const int slots = o.n * o.k;
  pauli::PauliTensor t(q, o.n, o.k);
  // x digits from the support of column 0
  int r0 = -1;
  for (int r = 0; r < o.dim; ++r)
    if (std::abs(o.at(r, 0)) > tol) {
      r0 = r;
      break;
    }
  if (r0 < 0) throw BadShape("dense_to_pauli: zero matrix");
  std::vector<int> xd(size_t(slots), 0);
  uint64_t rest = uint64_t(r0);
  for (int p = slots - 1; p >= 0; --p) {
    xd[size_t(p)] = int(rest % uint64_t(q));
    rest /= uint64_t(q);
  }
  cplx v0 = o.at(r0, 0);
  std::vector<int> zd(size_t(slots), 0);
  for (int p = 0; p < slots; ++p) {
    uint64_t col = ipow(uint64_t(q), slots - 1 - p);  // digit 1 at slot p
    uint64_t row = 0;
    for (int s = 0; s < slots; ++s) {
      int d = (s == p ? 1 : 0) + xd[size_t(s)];
      row = row * uint64_t(q) + uint64_t(d % q);
    }
    cplx v = o.at(int(row), int(col));
    if (std::abs(v) < tol) throw BadShape("dense_to_pauli: not a Weyl operator");
    double ang = std::arg(v / v0) / (2.0 * M_PI / double(q));
    int z = int(std::lround(ang));
    zd[size_t(p)] = ((z % q) + q) % q;
  }
  for (int c = 0; c < o.k; ++c)
    for (int j = 0; j < o.n; ++j) {
      t.rows.set(c, 2 * j, xd[size_t(c * o.n + j)]);
      t.rows.set(c, 2 * j + 1, zd[size_t(c * o.n + j)]);
    }
  DenseOperator w = dense_pauli(t);
  cplx phase = v0 / w.at(r0, 0);
  if (w.scaled(phase).max_abs_diff(o) > 10 * tol) throw BadShape("dense_to_pauli: residual too large");
  DecodedPauli out{t.factor(0), phase};
  if (o.k != 1) throw BadShape("dense_to_pauli: expected a single copy");
  return out;
}

// ---- class table and exact twirling ----------------------------------------

ClassTable build_class_table(int q, int n, int k, bool parallel) {
  ClassTable tab;
  tab.q = q;
  tab.n = n;
  tab.k = k;
  uint64_t total = ipow(uint64_t(q), 2 * n * k);
  tab.total = total;
  tab.class_id.assign(size_t(total), -1);
  tab.phase_exp.assign(size_t(total), 0);

  const uint64_t kChunks = 256;
  uint64_t chunk = (total + kChunks - 1) / kChunks;
  struct Local {
    std::vector<std::string> keys;      // local id -> key
    std::map<std::string, int> ids;
    std::vector<int32_t> assign;        // per index in chunk
  };
  std::vector<Local> locals{size_t(kChunks)};

  auto work = [&](uint64_t ci) {
    Local &loc = locals[size_t(ci)];
    uint64_t lo = ci * chunk, hi = std::min(total, lo + chunk);
    if (lo >= hi) return;
    loc.assign.assign(size_t(hi - lo), -1);
    for (uint64_t idx = lo; idx < hi; ++idx) {
      pauli::PauliTensor t = pauli::PauliTensor::from_index(q, n, k, idx);
      auto ct = pauli::cycle_trace_phase(t);
      if (!ct.nonzero) continue;
      tab.phase_exp[size_t(idx)] = int8_t(ct.phase.exp);
      auto d = pauli::decompose_tensor(t);
      auto g = pauli::anticomm_graph(d.paulis, q);
      std::string key = d.v.key() + g.g.key();
      auto it = loc.ids.find(key);
      int lid;
      if (it == loc.ids.end()) {
        lid = int(loc.keys.size());
        loc.keys.push_back(key);
        loc.ids.emplace(std::move(key), lid);
      } else {
        lid = it->second;
      }
      loc.assign[size_t(idx - lo)] = lid;
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int64_t ci = 0; ci < int64_t(kChunks); ++ci) work(uint64_t(ci));
  } else {
    for (uint64_t ci = 0; ci < kChunks; ++ci) work(ci);
  }

  std::map<std::string, int32_t> global;
  for (uint64_t ci = 0; ci < kChunks; ++ci) {
    Local &loc = locals[size_t(ci)];
    uint64_t lo = ci * chunk, hi = std::min(total, lo + chunk);
    if (lo >= hi) continue;
    std::vector<int32_t> remap(loc.keys.size());
    for (size_t l = 0; l < loc.keys.size(); ++l) {
      auto it = global.find(loc.keys[l]);
      if (it == global.end()) {
        int32_t gid = int32_t(tab.keys.size());
        global.emplace(loc.keys[l], gid);
        tab.keys.push_back(loc.keys[l]);
        tab.sizes.push_back(0);
        tab.reps.push_back(0);
        remap[l] = gid;
      } else {
        remap[l] = it->second;
      }
    }
    for (uint64_t idx = lo; idx < hi; ++idx) {
      int32_t lid = loc.assign[size_t(idx - lo)];
      if (lid < 0) continue;
      int32_t gid = remap[size_t(lid)];
      tab.class_id[size_t(idx)] = gid;
      if (tab.sizes[size_t(gid)] == 0) tab.reps[size_t(gid)] = idx;
      ++tab.sizes[size_t(gid)];
    }
  }
  return tab;
}

namespace {

DenseOperator exact_twirl_impl(const DenseOperator &o, const ClassTable &tab, bool parallel) {
  if (o.q != tab.q || o.n != tab.n || o.k != tab.k) throw ShapeMismatch("exact_twirl: table mismatch");
  const int q = tab.q;
  const auto taus = tau_table(q);
  const double dk = std::pow(double(ipow(uint64_t(q), tab.n)), tab.k);
  const size_t ncls = tab.keys.size();
  std::vector<cplx> acc(ncls, 0.0);

  const uint64_t kChunks = 64;
  uint64_t chunk = (tab.total + kChunks - 1) / kChunks;
  std::vector<std::vector<cplx>> acc_chunks{size_t(kChunks)};

  auto passA = [&](uint64_t ci) {
    uint64_t lo = ci * chunk, hi = std::min(tab.total, lo + chunk);
    if (lo >= hi) return;
    auto &la = acc_chunks[size_t(ci)];
    la.assign(ncls, 0.0);
    for (uint64_t idx = lo; idx < hi; ++idx) {
      int32_t cid = tab.class_id[size_t(idx)];
      if (cid < 0) continue;
      pauli::PauliTensor t = pauli::PauliTensor::from_index(q, tab.n, tab.k, idx);
      PauliAction act = pauli_action(t);
      cplx c = pauli_dagger_dot(act, taus, o) / dk;
      cplx phi = taus[size_t(tab.phase_exp[size_t(idx)])];
      la[size_t(cid)] += c * std::conj(phi);
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int64_t ci = 0; ci < int64_t(kChunks); ++ci) passA(uint64_t(ci));
  } else {
    for (uint64_t ci = 0; ci < kChunks; ++ci) passA(ci);
  }
  for (uint64_t ci = 0; ci < kChunks; ++ci)
    if (!acc_chunks[size_t(ci)].empty())
      for (size_t s = 0; s < ncls; ++s) acc[s] += acc_chunks[size_t(ci)][s];

  DenseOperator out(o.dim, o.n, o.k, o.q);
  for (uint64_t idx = 0; idx < tab.total; ++idx) {
    int32_t cid = tab.class_id[size_t(idx)];
    if (cid < 0) continue;
    cplx coeff = acc[size_t(cid)] / double(tab.sizes[size_t(cid)]);
    if (std::abs(coeff) == 0.0) continue;
    pauli::PauliTensor t = pauli::PauliTensor::from_index(q, tab.n, tab.k, idx);
    PauliAction act = pauli_action(t);
    add_pauli_scaled(out, act, taus, coeff * taus[size_t(tab.phase_exp[size_t(idx)])]);
  }
  return out;
}

}  // namespace

DenseOperator exact_twirl(const DenseOperator &o, const ClassTable &table) { return exact_twirl_impl(o, table, true); }

DenseOperator exact_twirl(const DenseOperator &o) {
  ClassTable tab = build_class_table(o.q, o.n, o.k, true);
  return exact_twirl_impl(o, tab, true);
}

DenseOperator exact_twirl_serial(const DenseOperator &o) {
  ClassTable tab = build_class_table(o.q, o.n, o.k, false);
  return exact_twirl_impl(o, tab, false);
}

DenseOperator weingarten_twirl(const DenseOperator &o, const std::vector<mono::Monomial> &basis,
                               const std::vector<double> &winv) {
  const int nb = int(basis.size());
  if (int(winv.size()) != nb * nb) throw ShapeMismatch("weingarten_twirl: winv size");
  // two streaming passes so only one basis matrix is alive at a time
  std::vector<cplx> tr(size_t(nb), 0.0);
  for (int i = 0; i < nb; ++i) {
    DenseOperator d = dense_monomial(basis[size_t(i)], o.n);
    if (d.dim != o.dim) throw ShapeMismatch("weingarten_twirl: basis dimension");
    cplx s = 0;  // tr(Omega_i^dag O) = sum conj(Omega_rc) O_rc
    for (size_t l = 0; l < d.a.size(); ++l) s += std::conj(d.a[l]) * o.a[l];
    tr[size_t(i)] = s;
  }
  DenseOperator out(o.dim, o.n, o.k, o.q);
  for (int j = 0; j < nb; ++j) {
    cplx c = 0;
    for (int i = 0; i < nb; ++i) c += winv[size_t(i) * nb + j] * tr[size_t(i)];
    if (std::abs(c) == 0.0) continue;
    DenseOperator d = dense_monomial(basis[size_t(j)], o.n);
    for (size_t l = 0; l < out.a.size(); ++l) out.a[l] += c * d.a[l];
  }
  return out;
}

DenseOperator dense_mho(const ClassTable &tab, int class_id) {
  uint64_t dim = ipow(uint64_t(tab.q), tab.n * tab.k);
  guard_dim(dim);
  DenseOperator out(int(dim), tab.n, tab.k, tab.q);
  const auto taus = tau_table(tab.q);
  for (uint64_t idx = 0; idx < tab.total; ++idx) {
    if (tab.class_id[size_t(idx)] != class_id) continue;
    pauli::PauliTensor t = pauli::PauliTensor::from_index(tab.q, tab.n, tab.k, idx);
    PauliAction act = pauli_action(t);
    add_pauli_scaled(out, act, taus, taus[size_t(tab.phase_exp[size_t(idx)])]);
  }
  return out.scaled(1.0 / double(tab.sizes[size_t(class_id)]));
}

// ---- Haar baseline -----------------------------------------------------------

namespace {

int cycle_count(const std::vector<int> &perm) {
  std::vector<bool> seen(perm.size(), false);
  int c = 0;
  for (size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    ++c;
    size_t cur = s;
    while (!seen[cur]) {
      seen[cur] = true;
      cur = size_t(perm[cur]);
    }
  }
  return c;
}

std::vector<int> compose(const std::vector<int> &a, const std::vector<int> &b) {
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[size_t(b[i])];
  return r;
}

}  // namespace

HaarGram haar_gram(int k, double d) {
  if (k > 6) throw TooLarge("haar_gram: k capped at 6");
  HaarGram hg;
  hg.k = k;
  std::vector<int> perm(size_t(k), 0);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    hg.perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const int f = int(hg.perms.size());
  hg.gram.assign(size_t(f) * f, 0.0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      hg.gram[size_t(i) * f + j] = std::pow(d, cycle_count(compose(hg.perms[size_t(i)], hg.perms[size_t(j)])));
  hg.winv = linalg::pinv_symmetric(hg.gram, f).pinv;
  return hg;
}

DenseOperator haar_twirl(const DenseOperator &o) {
  HaarGram hg = haar_gram(o.k, std::pow(double(o.q), o.n));
  const int f = int(hg.perms.size());
  std::vector<cplx> tr_sigma(size_t(f), cplx(0.0));
  std::vector<DenseOperator> perms;
  perms.reserve(size_t(f));
  for (int i = 0; i < f; ++i) perms.push_back(permutation_op(hg.perms[size_t(i)], o.n, o.q));
  for (int i = 0; i < f; ++i) tr_sigma[size_t(i)] = perms[size_t(i)].mul(o).trace();
  DenseOperator out(o.dim, o.n, o.k, o.q);
  for (int p = 0; p < f; ++p) {
    cplx c = 0;
    for (int s = 0; s < f; ++s) c += hg.winv[size_t(p) * f + s] * tr_sigma[size_t(s)];
    if (std::abs(c) == 0.0) continue;
    out = out.add(perms[size_t(p)].scaled(c));
  }
  return out;
}

double trace_norm_hermitian(const DenseOperator &o) {
  if (o.hermiticity_defect() > 1e-8) throw BadShape("trace_norm_hermitian: input not Hermitian");
  auto e = linalg::eig_hermitian(o.a, o.dim);
  double s = 0;
  for (double v : e.vals) s += std::abs(v);
  return s;
}

}  // namespace cliffcom::dense
