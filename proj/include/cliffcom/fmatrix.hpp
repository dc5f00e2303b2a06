#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cliffcom::gf {

// Dense matrix over a prime field F_q. For q = 2 rows are bit-packed into
// single words (cols <= 64) and row/column updates are XOR kernels; for
// general q entries are byte residues in [0, q).
class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(int q, int rows, int cols);

  static FMatrix identity(int q, int n);
  static FMatrix zero(int q, int rows, int cols) { return FMatrix(q, rows, cols); }

  int q() const { return q_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int at(int r, int c) const {
    if (q_ == 2) return int((bits_[size_t(r)] >> c) & 1);
    return vals_[size_t(r) * cols_ + c];
  }
  void set(int r, int c, int v) {
    v %= q_;
    if (v < 0) v += q_;
    if (q_ == 2) {
      bits_[size_t(r)] = (bits_[size_t(r)] & ~(uint64_t(1) << c)) | (uint64_t(v) << c);
    } else {
      vals_[size_t(r) * cols_ + c] = uint8_t(v);
    }
  }

  // q = 2 only: the bits of one column packed into a word (row r at bit r).
  uint64_t column_mask_u64(int c) const {
    uint64_t m = 0;
    for (int r = 0; r < rows_; ++r) m |= ((bits_[size_t(r)] >> c) & 1) << r;
    return m;
  }
  uint64_t row_word(int r) const { return bits_[size_t(r)]; }

  bool operator==(const FMatrix &o) const;
  bool operator!=(const FMatrix &o) const { return !(*this == o); }

  FMatrix mul(const FMatrix &o) const;
  FMatrix transpose() const;
  FMatrix neg() const;
  FMatrix add(const FMatrix &o) const;

  // col_dst += c * col_src  (mod q)
  void col_addmul(int dst, int src, int c);
  void row_addmul(int dst, int src, int c);
  void swap_cols(int a, int b);
  void swap_rows(int a, int b);
  void scale_col(int c, int f);
  void scale_row(int r, int f);

  // Integer (not mod-q) column statistics, used for parity bookkeeping.
  int col_weight_int(int c) const;          // sum of entries as integers
  int col_overlap_int(int a, int b) const;  // sum over rows of e_a * e_b as integers
  int col_sum_mod(int c) const;             // sum of entries mod q

  bool is_zero() const;
  bool col_is_zero(int c) const;

  FMatrix submatrix_cols(const std::vector<int> &keep) const;
  FMatrix submatrix(const std::vector<int> &keep_rows, const std::vector<int> &keep_cols) const;

  // Text encoding: rows as base-q digit strings, first digit = column 1,
  // rows joined by '/'. "10/01" is the 2x2 identity.
  std::string to_string() const;
  static FMatrix from_string(int q, const std::string &s);

  // Compact byte key for hashing / deterministic ordering.
  std::string key() const;

 private:
  int q_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<uint64_t> bits_;  // q == 2: one word per row
  std::vector<uint8_t> vals_;   // q > 2: row-major residues
};

struct GLTransform {
  FMatrix matrix;
  FMatrix inverse;
};

int rank(const FMatrix &m);

// Reduced column echelon form: echelon = m * transform.matrix, pivot entries 1,
// pivot rows increasing top to bottom, pivot rows contain no other nonzeros,
// entries above each pivot zero. Unique representative of the column space.
struct EchelonResult {
  FMatrix echelon;
  GLTransform transform;
  int rank = 0;
  std::vector<int> pivot_rows;
};
EchelonResult column_echelon(const FMatrix &m);

FMatrix invert(const FMatrix &m);  // throws SingularMatrix

// Congruence canonical form of an alternating matrix:
// transform.matrix^T * g * transform.matrix = blockdiag([[0,1],[-1,0]] x half_rank, 0).
// For q = 2 the input must be symmetric with zero diagonal, for q > 2 antisymmetric.
struct AntisymCanonical {
  GLTransform transform;
  int half_rank = 0;
};
AntisymCanonical antisymmetric_canonical(const FMatrix &g);

int inv_mod(int a, int q);

}  // namespace cliffcom::gf
