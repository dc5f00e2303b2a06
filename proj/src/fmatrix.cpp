#include "cliffcom/fmatrix.hpp"

#include <bit>

#include "cliffcom/errors.hpp"

namespace cliffcom::gf {

int inv_mod(int a, int q) {
  a %= q;
  if (a < 0) a += q;
  if (a == 0) throw SingularMatrix("no inverse of 0 mod " + std::to_string(q));
  int r = 1;
  for (int e = q - 2; e > 0; e >>= 1) {  // Fermat, q prime
    if (e & 1) r = r * a % q;
    a = a * a % q;
  }
  return r;
}

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int p = 2; p * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

}  // namespace

FMatrix::FMatrix(int q, int rows, int cols) : q_(q), rows_(rows), cols_(cols) {
  if (q != 2 && !is_prime(q)) throw BadShape("modulus must be prime");
  if (rows < 0 || cols < 0) throw BadShape("negative dimension");
  if (q == 2) {
    if (cols > 64) throw TooLarge("bit-packed rows support at most 64 columns");
    bits_.assign(size_t(rows), 0);
  } else {
    vals_.assign(size_t(rows) * size_t(cols), 0);
  }
}

FMatrix FMatrix::identity(int q, int n) {
  FMatrix m(q, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

bool FMatrix::operator==(const FMatrix &o) const {
  return q_ == o.q_ && rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_ && vals_ == o.vals_;
}

FMatrix FMatrix::mul(const FMatrix &o) const {
  if (q_ != o.q_ || cols_ != o.rows_) throw ShapeMismatch("FMatrix::mul");
  FMatrix r(q_, rows_, o.cols_);
  if (q_ == 2) {
    // r.row(i) = XOR of o.row(j) over set bits j of row i
    for (int i = 0; i < rows_; ++i) {
      uint64_t acc = 0;
      uint64_t m = bits_[size_t(i)];
      while (m) {
        int j = std::countr_zero(m);
        m &= m - 1;
        acc ^= o.bits_[size_t(j)];
      }
      r.bits_[size_t(i)] = acc;
    }
  } else {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        int a = at(i, j);
        if (!a) continue;
        for (int c = 0; c < o.cols_; ++c) {
          int cur = r.at(i, c) + a * o.at(j, c);
          r.set(i, c, cur % q_);
        }
      }
  }
  return r;
}

FMatrix FMatrix::transpose() const {
  FMatrix r(q_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

FMatrix FMatrix::neg() const {
  FMatrix r = *this;
  if (q_ == 2) return r;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(i, j, (q_ - at(i, j)) % q_);
  return r;
}

FMatrix FMatrix::add(const FMatrix &o) const {
  if (q_ != o.q_ || rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("FMatrix::add");
  FMatrix r = *this;
  if (q_ == 2) {
    for (int i = 0; i < rows_; ++i) r.bits_[size_t(i)] ^= o.bits_[size_t(i)];
  } else {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.set(i, j, (at(i, j) + o.at(i, j)) % q_);
  }
  return r;
}

void FMatrix::col_addmul(int dst, int src, int c) {
  if (dst < 0 || dst >= cols_ || src < 0 || src >= cols_) throw IndexOutOfRange("col_addmul");
  c %= q_;
  if (c < 0) c += q_;
  if (!c) return;
  if (q_ == 2) {
    for (int i = 0; i < rows_; ++i) bits_[size_t(i)] ^= ((bits_[size_t(i)] >> src) & 1) << dst;
  } else {
    for (int i = 0; i < rows_; ++i) set(i, dst, (at(i, dst) + c * at(i, src)) % q_);
  }
}

void FMatrix::row_addmul(int dst, int src, int c) {
  if (dst < 0 || dst >= rows_ || src < 0 || src >= rows_) throw IndexOutOfRange("row_addmul");
  c %= q_;
  if (c < 0) c += q_;
  if (!c) return;
  if (q_ == 2) {
    bits_[size_t(dst)] ^= bits_[size_t(src)];
  } else {
    for (int j = 0; j < cols_; ++j) set(dst, j, (at(dst, j) + c * at(src, j)) % q_);
  }
}

void FMatrix::swap_cols(int a, int b) {
  if (a == b) return;
  for (int i = 0; i < rows_; ++i) {
    int t = at(i, a);
    set(i, a, at(i, b));
    set(i, b, t);
  }
}

void FMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  if (q_ == 2) {
    std::swap(bits_[size_t(a)], bits_[size_t(b)]);
  } else {
    for (int j = 0; j < cols_; ++j) {
      int t = at(a, j);
      set(a, j, at(b, j));
      set(b, j, t);
    }
  }
}

void FMatrix::scale_col(int c, int f) {
  f %= q_;
  if (f < 0) f += q_;
  if (f == 1) return;
  for (int i = 0; i < rows_; ++i) set(i, c, at(i, c) * f % q_);
}

void FMatrix::scale_row(int r, int f) {
  f %= q_;
  if (f < 0) f += q_;
  if (f == 1) return;
  for (int j = 0; j < cols_; ++j) set(r, j, at(r, j) * f % q_);
}

int FMatrix::col_weight_int(int c) const {
  int w = 0;
  for (int i = 0; i < rows_; ++i) w += at(i, c);
  return w;
}

int FMatrix::col_overlap_int(int a, int b) const {
  int w = 0;
  for (int i = 0; i < rows_; ++i) w += at(i, a) * at(i, b);
  return w;
}

int FMatrix::col_sum_mod(int c) const { return col_weight_int(c) % q_; }

bool FMatrix::is_zero() const {
  for (uint64_t w : bits_)
    if (w) return false;
  for (uint8_t v : vals_)
    if (v) return false;
  return true;
}

bool FMatrix::col_is_zero(int c) const {
  for (int i = 0; i < rows_; ++i)
    if (at(i, c)) return false;
  return true;
}

FMatrix FMatrix::submatrix_cols(const std::vector<int> &keep) const {
  FMatrix r(q_, rows_, int(keep.size()));
  for (int j = 0; j < int(keep.size()); ++j)
    for (int i = 0; i < rows_; ++i) r.set(i, j, at(i, keep[size_t(j)]));
  return r;
}

FMatrix FMatrix::submatrix(const std::vector<int> &keep_rows, const std::vector<int> &keep_cols) const {
  FMatrix r(q_, int(keep_rows.size()), int(keep_cols.size()));
  for (int i = 0; i < int(keep_rows.size()); ++i)
    for (int j = 0; j < int(keep_cols.size()); ++j) r.set(i, j, at(keep_rows[size_t(i)], keep_cols[size_t(j)]));
  return r;
}

std::string FMatrix::to_string() const {
  std::string s;
  for (int i = 0; i < rows_; ++i) {
    if (i) s.push_back('/');
    for (int j = 0; j < cols_; ++j) s.push_back(char('0' + at(i, j)));
  }
  return s;
}

FMatrix FMatrix::from_string(int q, const std::string &s) {
  std::vector<std::string> rows;
  std::string cur;
  for (char c : s) {
    if (c == '/') {
      rows.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  rows.push_back(cur);
  int nr = int(rows.size());
  int nc = int(rows[0].size());
  FMatrix m(q, nr, nc);
  for (int i = 0; i < nr; ++i) {
    if (int(rows[size_t(i)].size()) != nc) throw ParseError("ragged matrix string");
    for (int j = 0; j < nc; ++j) {
      char c = rows[size_t(i)][size_t(j)];
      if (c < '0' || c >= char('0' + q)) throw ParseError("digit out of range for F_" + std::to_string(q));
      m.set(i, j, c - '0');
    }
  }
  return m;
}

std::string FMatrix::key() const {
  std::string k;
  k.reserve(4 + size_t(rows_) * 8);
  k.push_back(char(q_));
  k.push_back(char(rows_));
  k.push_back(char(cols_));
  if (q_ == 2) {
    for (uint64_t w : bits_)
      for (int b = 0; b < 8; ++b) k.push_back(char((w >> (8 * b)) & 0xff));
  } else {
    for (uint8_t v : vals_) k.push_back(char(v));
  }
  return k;
}

EchelonResult column_echelon(const FMatrix &m) {
  const int q = m.q();
  EchelonResult res{m, {FMatrix::identity(q, m.cols()), FMatrix::identity(q, m.cols())}, 0, {}};
  FMatrix &a = res.echelon;
  FMatrix &t = res.transform.matrix;
  FMatrix &tinv = res.transform.inverse;
  int pc = 0;
  for (int r = 0; r < m.rows() && pc < m.cols(); ++r) {
    int piv = -1;
    for (int j = pc; j < m.cols(); ++j)
      if (a.at(r, j)) {
        piv = j;
        break;
      }
    if (piv < 0) continue;
    if (piv != pc) {
      a.swap_cols(piv, pc);
      t.swap_cols(piv, pc);
      tinv.swap_rows(piv, pc);
    }
    if (q != 2) {
      int f = inv_mod(a.at(r, pc), q);
      a.scale_col(pc, f);
      t.scale_col(pc, f);
      tinv.scale_row(pc, inv_mod(f, q));
    }
    for (int j = 0; j < m.cols(); ++j) {
      if (j == pc) continue;
      int c = a.at(r, j);
      if (!c) continue;
      a.col_addmul(j, pc, q - c);
      t.col_addmul(j, pc, q - c);
      tinv.row_addmul(pc, j, c);
    }
    res.pivot_rows.push_back(r);
    ++pc;
  }
  res.rank = pc;
  return res;
}

int rank(const FMatrix &m) { return column_echelon(m).rank; }

FMatrix invert(const FMatrix &m) {
  if (m.rows() != m.cols()) throw BadShape("invert needs a square matrix");
  EchelonResult e = column_echelon(m);
  if (e.rank < m.cols()) throw SingularMatrix("rank " + std::to_string(e.rank) + " < " + std::to_string(m.cols()));
  // full-rank square echelon is the identity, so m * T = I
  return e.transform.matrix;
}

AntisymCanonical antisymmetric_canonical(const FMatrix &g) {
  const int q = g.q();
  if (g.rows() != g.cols()) throw BadShape("antisymmetric_canonical needs a square matrix");
  for (int i = 0; i < g.rows(); ++i) {
    if (g.at(i, i) != 0) throw BadShape("nonzero diagonal");
    for (int j = 0; j < g.cols(); ++j) {
      int want = q == 2 ? g.at(j, i) : (q - g.at(j, i)) % q;
      if (g.at(i, j) != want) throw BadShape("matrix is not in the alternating symmetry class");
    }
  }
  const int n = g.rows();
  AntisymCanonical res{{FMatrix::identity(q, n), FMatrix::identity(q, n)}, 0};
  FMatrix b = g;
  FMatrix &c = res.transform.matrix;
  FMatrix &cinv = res.transform.inverse;

  auto congr_swap = [&](int x, int y) {
    b.swap_cols(x, y);
    b.swap_rows(x, y);
    c.swap_cols(x, y);
    cinv.swap_rows(x, y);
  };
  auto congr_addmul = [&](int dst, int src, int f) {
    b.col_addmul(dst, src, f);
    b.row_addmul(dst, src, f);
    c.col_addmul(dst, src, f);
    cinv.row_addmul(src, dst, q - f);
  };
  auto congr_scale = [&](int x, int f) {
    b.scale_col(x, f);
    b.scale_row(x, f);
    c.scale_col(x, f);
    cinv.scale_row(x, inv_mod(f, q));
  };

  int pos = 0;
  while (pos + 1 < n) {
    int pi = -1, pj = -1;
    for (int i = pos; i < n && pi < 0; ++i)
      for (int j = pos; j < n; ++j)
        if (b.at(i, j)) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    congr_swap(pi, pos);
    if (pj == pos) pj = pi;  // the partner followed the swap
    congr_swap(pj, pos + 1);
    if (q != 2) congr_scale(pos + 1, inv_mod(b.at(pos, pos + 1), q));
    for (int l = pos + 2; l < n; ++l) {
      int u = b.at(pos, l);
      if (u) {
        // kill via the partner column: B[pos][pos+1] = 1
        congr_addmul(l, pos + 1, q == 2 ? u : (q - u * inv_mod(b.at(pos, pos + 1), q) % q + q) % q);
      }
      int v = b.at(pos + 1, l);
      if (v) {
        int piv = b.at(pos + 1, pos);  // -1 for q > 2, 1 for q = 2
        congr_addmul(l, pos, (q - v * inv_mod(piv, q) % q + q) % q);
      }
    }
    pos += 2;
    ++res.half_rank;
  }
  return res;
}

}  // namespace cliffcom::gf
