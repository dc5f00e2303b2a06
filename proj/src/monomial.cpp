#include "cliffcom/monomial.hpp"

#include <algorithm>
#include <numeric>

#include "cliffcom/errors.hpp"

namespace cliffcom::mono {

namespace {

void check_symmetry_class(const gf::FMatrix &m, int q) {
  if (m.rows() != m.cols()) throw BadShape("M must be square");
  for (int i = 0; i < m.rows(); ++i) {
    if (m.at(i, i) != 0) throw BadShape("M must have zero diagonal");
    for (int j = 0; j < m.cols(); ++j) {
      int want = q == 2 ? m.at(j, i) : (q - m.at(j, i)) % q;
      if (m.at(i, j) != want) throw BadShape("M violates its symmetry class");
    }
  }
}

// Upper-triangular-plus-half-diagonal packing of H = V^T V.
gf::FMatrix half_h(const gf::FMatrix &v, int q) {
  const int m = v.cols();
  gf::FMatrix h(q, m, m);
  if (q == 2) {
    uint64_t masks[64];
    for (int i = 0; i < m; ++i) masks[i] = v.column_mask_u64(i);
    for (int i = 0; i < m; ++i) {
      h.set(i, i, (__builtin_popcountll(masks[i]) / 2) & 1);
      for (int j = i + 1; j < m; ++j) h.set(i, j, __builtin_popcountll(masks[i] & masks[j]) & 1);
    }
    return h;
  }
  for (int i = 0; i < m; ++i) {
    h.set(i, i, v.col_overlap_int(i, i) % q * gf::inv_mod(2, q) % q);
    for (int j = i + 1; j < m; ++j) h.set(i, j, v.col_overlap_int(i, j) % q);
  }
  return h;
}

}  // namespace

Monomial::Monomial(int k_, int q_, gf::FMatrix v, gf::FMatrix m)
    : k(k_), q(q_), V(std::move(v)), M(std::move(m)) {
  if (V.rows() != k || V.q() != q) throw BadShape("V must be k x m over F_q");
  if (M.rows() != V.cols() || M.q() != q) throw BadShape("M must be m x m over F_q");
  for (int j = 0; j < V.cols(); ++j)
    if (V.col_sum_mod(j) != 0) throw OddColumn("column " + std::to_string(j) + " has nonzero sum mod q");
  check_symmetry_class(M, q);
}

namespace {

// invariant-preserving internal ops skip the constructor checks
Monomial trusted(int k, int q, gf::FMatrix v, gf::FMatrix m) {
  Monomial out;
  out.k = k;
  out.q = q;
  out.V = std::move(v);
  out.M = std::move(m);
  return out;
}

}  // namespace

Monomial Monomial::identity(int k, int q) {
  return Monomial(k, q, gf::FMatrix(q, k, 0), gf::FMatrix(q, 0, 0));
}

int Monomial::col_half_weight(int i) const {
  if (q == 2) return (V.col_weight_int(i) / 2) % 2;
  return V.col_overlap_int(i, i) % q * gf::inv_mod(2, q) % q;
}

std::string Monomial::key() const {
  std::string s;
  s.push_back(char(k));
  s.push_back(char(q));
  s += V.key();
  s += M.key();
  return s;
}

gf::FMatrix lambda_of(const Monomial &m) {
  gf::FMatrix lam = half_h(m.V, m.q);
  for (int i = 0; i < m.m(); ++i)
    for (int j = 0; j < m.m(); ++j) lam.set(i, j, (lam.at(i, j) + m.M.at(i, j)) % m.q);
  return lam;
}

Monomial primitive(int k, const std::vector<int> &v, int q) {
  if (int(v.size()) != k) throw BadShape("primitive: column length != k");
  gf::FMatrix V(q, k, 1);
  int s = 0;
  for (int i = 0; i < k; ++i) {
    V.set(i, 0, v[size_t(i)]);
    s += V.at(i, 0);
  }
  if (s % q != 0) throw OddColumn("primitive: column sum is " + std::to_string(s % q) + " mod q");
  return Monomial(k, q, V, gf::FMatrix(q, 1, 1));
}

Monomial swap_monomial(int k, int q, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= k || j >= k) throw IndexOutOfRange("swap_monomial");
  std::vector<int> v(size_t(k), 0);
  v[size_t(i)] = 1;
  v[size_t(j)] = q - 1;
  return primitive(k, v, q);
}

Monomial perm_monomial(int k, int q, const std::vector<int> &perm) {
  if (int(perm.size()) != k) throw BadShape("perm_monomial");
  // cycle decomposition into transpositions, applied left to right
  std::vector<bool> seen(size_t(k), false);
  std::vector<std::pair<int, int>> swaps;
  for (int s = 0; s < k; ++s) {
    if (seen[size_t(s)]) continue;
    std::vector<int> cyc;
    int cur = s;
    while (!seen[size_t(cur)]) {
      seen[size_t(cur)] = true;
      cyc.push_back(cur);
      cur = perm[size_t(cur)];
    }
    for (size_t t = 0; t + 1 < cyc.size(); ++t) swaps.emplace_back(cyc[t], cyc[t + 1]);
  }
  gf::FMatrix V(q, k, int(swaps.size()));
  for (int c = 0; c < int(swaps.size()); ++c) {
    V.set(swaps[size_t(c)].first, c, 1);
    V.set(swaps[size_t(c)].second, c, q - 1);
  }
  return Monomial(k, q, V, gf::FMatrix(q, int(swaps.size()), int(swaps.size())));
}

Monomial apply_gl_mat(const Monomial &m, const gf::FMatrix &a) {
  if (a.rows() != m.m() || a.cols() != m.m() || a.q() != m.q) throw ShapeMismatch("apply_gl");
  gf::FMatrix v2 = m.V.mul(a);
  gf::FMatrix lam2 = a.transpose().mul(lambda_of(m)).mul(a);
  gf::FMatrix hh = half_h(v2, m.q);
  gf::FMatrix m2(m.q, m.m(), m.m());
  for (int i = 0; i < m.m(); ++i) {
    if (lam2.at(i, i) != hh.at(i, i))
      throw BadShape("apply_gl: lambda diagonal does not match transformed weights");
    for (int j = 0; j < m.m(); ++j) {
      if (i == j) continue;
      m2.set(i, j, (lam2.at(i, j) - hh.at(i, j) + m.q) % m.q);
    }
  }
  return trusted(m.k, m.q, std::move(v2), std::move(m2));
}

Monomial apply_gl(const Monomial &m, const gf::GLTransform &a) {
  gf::FMatrix prod = a.matrix.mul(a.inverse);
  if (!(prod == gf::FMatrix::identity(m.q, m.m()))) throw BadShape("apply_gl: transform is not invertible");
  return apply_gl_mat(m, a.matrix);
}

Monomial add_column(const Monomial &m, int target, int source) {
  if (target < 0 || target >= m.m() || source < 0 || source >= m.m() || target == source)
    throw IndexOutOfRange("add_column");
  gf::FMatrix a = gf::FMatrix::identity(m.q, m.m());
  a.set(source, target, 1);
  return apply_gl_mat(m, a);
}

Monomial swap_columns(const Monomial &m, int i, int j) {
  if (i < 0 || i >= m.m() || j < 0 || j >= m.m()) throw IndexOutOfRange("swap_columns");
  gf::FMatrix a = gf::FMatrix::identity(m.q, m.m());
  if (i != j) a.swap_cols(i, j);
  return apply_gl_mat(m, a);
}

Monomial adjoint(const Monomial &m) {
  const int mm = m.m();
  gf::FMatrix v(m.q, m.k, mm), mm2(m.q, mm, mm);
  for (int a = 0; a < mm; ++a) {
    for (int r = 0; r < m.k; ++r) v.set(r, a, m.V.at(r, mm - 1 - a));
    for (int b = 0; b < mm; ++b)
      if (a != b) mm2.set(a, b, (m.q - m.M.at(mm - 1 - a, mm - 1 - b)) % m.q);
  }
  return trusted(m.k, m.q, std::move(v), std::move(mm2));
}

namespace {

Monomial drop_columns(const Monomial &m, std::vector<int> drop) {
  std::sort(drop.begin(), drop.end());
  std::vector<int> keep;
  for (int i = 0; i < m.m(); ++i)
    if (!std::binary_search(drop.begin(), drop.end(), i)) keep.push_back(i);
  return trusted(m.k, m.q, m.V.submatrix_cols(keep), m.M.submatrix(keep, keep));
}

}  // namespace

ReductionResult reduce(const Monomial &input) {
  Monomial cur = input;
  int alpha = 0, ndeps = 0;
  const int q = input.q;
  for (;;) {
    int z = -1;
    for (int j = 0; j < cur.m(); ++j)
      if (cur.V.col_is_zero(j)) {
        z = j;
        break;
      }
    if (z >= 0) {
      std::vector<int> connected;
      for (int j = 0; j < cur.m(); ++j)
        if (j != z && cur.M.at(z, j) != 0) connected.push_back(j);
      if (connected.empty()) {
        cur = drop_columns(cur, {z});
        ++alpha;
        ++ndeps;
      } else if (connected.size() == 1) {
        cur = drop_columns(cur, {z, connected[0]});
        ++ndeps;
      } else {
        // chain elimination, right to left: cancel the phase on the
        // second-largest connected column using the largest one
        int a = connected[connected.size() - 1];
        int b = connected[connected.size() - 2];
        int f = (q - cur.M.at(z, b) * gf::inv_mod(cur.M.at(z, a), q)) % q;
        gf::FMatrix t = gf::FMatrix::identity(q, cur.m());
        t.set(a, b, f);
        cur = apply_gl_mat(cur, t);
      }
      continue;
    }
    auto ech = gf::column_echelon(cur.V);
    if (ech.rank == cur.m()) break;
    cur = apply_gl_mat(cur, ech.transform.matrix);
  }
  return {cur, alpha, ndeps};
}

ReductionResult multiply(const Monomial &a, const Monomial &b) {
  if (a.k != b.k || a.q != b.q) throw ShapeMismatch("multiply");
  const int ma = a.m(), mb = b.m();
  gf::FMatrix v(a.q, a.k, ma + mb), m(a.q, ma + mb, ma + mb);
  for (int r = 0; r < a.k; ++r) {
    for (int c = 0; c < ma; ++c) v.set(r, c, a.V.at(r, c));
    for (int c = 0; c < mb; ++c) v.set(r, ma + c, b.V.at(r, c));
  }
  for (int i = 0; i < ma; ++i)
    for (int j = 0; j < ma; ++j) m.set(i, j, a.M.at(i, j));
  for (int i = 0; i < mb; ++i)
    for (int j = 0; j < mb; ++j) m.set(ma + i, ma + j, b.M.at(i, j));
  return reduce(trusted(a.k, a.q, std::move(v), std::move(m)));
}

int trace_exponent(const Monomial &m) {
  ReductionResult r = reduce(m);
  return m.k - m.m() + 2 * r.beta;
}

int order(const Monomial &m) { return reduce(m).reduced.m(); }

bool is_reduced(const Monomial &m) { return gf::rank(m.V) == m.m(); }

Monomial canonical(const Monomial &m) {
  Monomial r = reduce(m).reduced;
  auto ech = gf::column_echelon(r.V);
  return apply_gl_mat(r, ech.transform.matrix);
}

namespace {

// Clears the phase between columns `src` and `dst` by adding a multiple of
// src into dst; returns false when no coefficient works.
bool clear_phase_by_add(Monomial &w, int src, int dst) {
  if (w.M.at(src, dst) == 0) return true;
  for (int f = 1; f < w.q; ++f) {
    gf::FMatrix a = gf::FMatrix::identity(w.q, w.m());
    a.set(src, dst, f);
    Monomial cand = apply_gl_mat(w, a);
    if (cand.M.at(src, dst) == 0) {
      w = cand;
      return true;
    }
  }
  return false;
}

// Rule-4 expansion: two commuting projective-type columns i < j sharing a
// phase become four unitary-type columns; two swap columns are appended.
void expand_phased_projector_pair(Monomial &w, int i, int j) {
  const int q = w.q;
  if (w.V.col_overlap_int(i, j) == 0) w = add_column(w, i, j);
  // a row pair where both columns are nonzero; for q > 2 the entries must
  // match so the appended swap columns commute with both
  int p1 = -1, p2 = -1;
  for (int r1 = 0; r1 < w.k && p1 < 0; ++r1) {
    if (!w.V.at(r1, i) || !w.V.at(r1, j)) continue;
    for (int r2 = r1 + 1; r2 < w.k; ++r2) {
      if (!w.V.at(r2, i) || !w.V.at(r2, j)) continue;
      if (q != 2 && (w.V.at(r1, i) != w.V.at(r2, i) || w.V.at(r1, j) != w.V.at(r2, j))) continue;
      p1 = r1;
      p2 = r2;
      break;
    }
  }
  if (p2 < 0) throw Infeasible("rule 4: no usable overlap row pair");
  const int m0 = w.m();
  gf::FMatrix v(q, w.k, m0 + 2), m(q, m0 + 2, m0 + 2);
  for (int r = 0; r < w.k; ++r)
    for (int c = 0; c < m0; ++c) v.set(r, c, w.V.at(r, c));
  for (int a = 0; a < m0; ++a)
    for (int b = 0; b < m0; ++b) m.set(a, b, w.M.at(a, b));
  for (int e = 0; e < 2; ++e) {
    v.set(p1, m0 + e, 1);
    v.set(p2, m0 + e, q - 1);
  }
  w = Monomial(w.k, q, v, m);
  const int e1 = m0;
  // identity-preserving move sequence: the first add puts a phase between e1
  // and j and makes j odd; the remaining adds cancel one phase each
  w = add_column(w, j, e1);
  if (w.M.at(e1, j) == 0) throw BadShape("rule 4: seed phase did not appear");
  if (!clear_phase_by_add(w, j, i)) throw BadShape("rule 4 step b failed");
  if (!clear_phase_by_add(w, j, e1)) throw BadShape("rule 4 step c failed");
  if (!clear_phase_by_add(w, i, e1)) throw BadShape("rule 4 step d failed");
}

}  // namespace

NormalForm normal_form(const Monomial &input) {
  Monomial w = reduce(input).reduced;
  int settled = 0;
  for (;;) {
    const int mm = w.m();
    const int lim = mm - settled;
    int odd = -1;
    for (int j = 0; j < lim; ++j)
      if (w.col_half_weight(j) != 0) {
        odd = j;
        break;
      }
    if (odd >= 0) {
      for (int t = odd; t > 0; --t) w = swap_columns(w, t - 1, t);
      for (int t = 0; t + 1 < lim; ++t) {
        w = swap_columns(w, t, t + 1);
        if (w.M.at(t, t + 1) != 0 && !clear_phase_by_add(w, t + 1, t))
          throw BadShape("normal form: cannot clear phase off a unitary column");
      }
      ++settled;
      continue;
    }
    int pi = -1, pj = -1;
    for (int i = 0; i < lim && pi < 0; ++i)
      for (int j = i + 1; j < lim; ++j)
        if (w.V.col_overlap_int(i, j) % w.q != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi >= 0) {
      w = add_column(w, pj, pi);  // target picks up odd weight
      continue;
    }
    for (int i = 0; i < lim && pi < 0; ++i)
      for (int j = i + 1; j < lim; ++j)
        if (w.M.at(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi >= 0) {
      expand_phased_projector_pair(w, pi, pj);
      continue;
    }
    break;
  }
  const int mm = w.m();
  const int np = mm - settled;
  std::vector<int> proj_cols(size_t(np), 0), unit_cols(size_t(settled), 0);
  std::iota(proj_cols.begin(), proj_cols.end(), 0);
  std::iota(unit_cols.begin(), unit_cols.end(), np);
  NormalForm nf;
  nf.projective = Monomial(w.k, w.q, w.V.submatrix_cols(proj_cols),
                           gf::FMatrix(w.q, np, np));
  nf.unitary = Monomial(w.k, w.q, w.V.submatrix_cols(unit_cols),
                        gf::FMatrix(w.q, settled, settled));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      if (w.M.at(i, j) != 0) throw BadShape("normal form: projective block still carries phases");
  for (int i = 0; i < settled; ++i)
    for (int j = 0; j < settled; ++j)
      if (w.M.at(np + i, np + j) != 0) throw BadShape("normal form: unitary block still carries phases");
  return nf;
}

MonomialClass classify(const Monomial &m) {
  NormalForm nf = normal_form(m);
  if (nf.projective.m() == 0) return MonomialClass::unitary;
  if (nf.unitary.m() == 0) return MonomialClass::projector_scaled;
  return MonomialClass::product;
}

std::string to_string(MonomialClass c) {
  switch (c) {
    case MonomialClass::projector_scaled: return "projector_scaled";
    case MonomialClass::unitary: return "unitary";
    default: return "product";
  }
}

}  // namespace cliffcom::mono
