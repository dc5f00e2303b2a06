#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliffcom {

// Unsigned arbitrary-precision integer. Only the operations the counting
// formulas need: add, sub, mul, exact divmod, pow, comparison, decimal I/O.
class BigUint {
 public:
  BigUint() = default;
  BigUint(uint64_t v) {  // NOLINT: implicit on purpose
    if (v) limbs_.push_back(v);
  }

  static BigUint from_decimal(const std::string &s) {
    BigUint r;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("BigUint: bad digit");
      r = r * BigUint(10) + BigUint(uint64_t(c - '0'));
    }
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool operator==(const BigUint &o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigUint &o) const { return !(*this == o); }
  bool operator<(const BigUint &o) const { return cmp(o) < 0; }
  bool operator<=(const BigUint &o) const { return cmp(o) <= 0; }
  bool operator>(const BigUint &o) const { return cmp(o) > 0; }
  bool operator>=(const BigUint &o) const { return cmp(o) >= 0; }

  BigUint operator+(const BigUint &o) const {
    BigUint r;
    size_t n = std::max(limbs_.size(), o.limbs_.size());
    r.limbs_.resize(n, 0);
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < n; ++i) {
      unsigned __int128 s = carry;
      if (i < limbs_.size()) s += limbs_[i];
      if (i < o.limbs_.size()) s += o.limbs_[i];
      r.limbs_[i] = uint64_t(s);
      carry = s >> 64;
    }
    if (carry) r.limbs_.push_back(uint64_t(carry));
    return r;
  }

  BigUint operator-(const BigUint &o) const {
    if (*this < o) throw std::underflow_error("BigUint: negative result");
    BigUint r;
    r.limbs_.resize(limbs_.size(), 0);
    unsigned __int128 borrow = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
      unsigned __int128 rhs = borrow;
      if (i < o.limbs_.size()) rhs += o.limbs_[i];
      unsigned __int128 lhs = limbs_[i];
      if (lhs >= rhs) {
        r.limbs_[i] = uint64_t(lhs - rhs);
        borrow = 0;
      } else {
        r.limbs_[i] = uint64_t((((unsigned __int128)1) << 64) + lhs - rhs);
        borrow = 1;
      }
    }
    r.trim();
    return r;
  }

  BigUint operator*(const BigUint &o) const {
    if (is_zero() || o.is_zero()) return BigUint();
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      unsigned __int128 carry = 0;
      for (size_t j = 0; j < o.limbs_.size(); ++j) {
        unsigned __int128 cur = (unsigned __int128)limbs_[i] * o.limbs_[j] + r.limbs_[i + j] + carry;
        r.limbs_[i + j] = uint64_t(cur);
        carry = cur >> 64;
      }
      size_t pos = i + o.limbs_.size();
      while (carry) {
        unsigned __int128 cur = (unsigned __int128)r.limbs_[pos] + carry;
        r.limbs_[pos] = uint64_t(cur);
        carry = cur >> 64;
        ++pos;
      }
    }
    r.trim();
    return r;
  }

  // Long division, binary shift-and-subtract. Fine at these sizes.
  static void divmod(const BigUint &num, const BigUint &den, BigUint &quot, BigUint &rem) {
    if (den.is_zero()) throw std::domain_error("BigUint: divide by zero");
    quot = BigUint();
    rem = BigUint();
    int nb = num.bit_length();
    for (int i = nb - 1; i >= 0; --i) {
      rem = rem.shl1();
      if (num.bit(i)) rem.set_bit0();
      if (rem >= den) {
        rem = rem - den;
        quot.set_bit(i);
      }
    }
    quot.trim();
    rem.trim();
  }

  BigUint operator/(const BigUint &o) const {
    BigUint q, r;
    divmod(*this, o, q, r);
    return q;
  }
  BigUint operator%(const BigUint &o) const {
    BigUint q, r;
    divmod(*this, o, q, r);
    return r;
  }

  static BigUint pow(const BigUint &base, uint64_t e) {
    BigUint r(1), b = base;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  uint64_t to_u64() const {
    if (limbs_.size() > 1) throw std::overflow_error("BigUint: does not fit u64");
    return limbs_.empty() ? 0 : limbs_[0];
  }

  double to_double() const {
    double r = 0;
    for (size_t i = limbs_.size(); i-- > 0;) r = r * 18446744073709551616.0 + double(limbs_[i]);
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    BigUint cur = *this;
    BigUint ten(10);
    while (!cur.is_zero()) {
      BigUint q, r;
      divmod(cur, ten, q, r);
      out.push_back(char('0' + (r.limbs_.empty() ? 0 : r.limbs_[0])));
      cur = q;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<uint64_t> limbs_;  // little endian, no trailing zeros

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  int cmp(const BigUint &o) const {
    if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
  }
  int bit_length() const {
    if (limbs_.empty()) return 0;
    int top = 63;
    while (top > 0 && !((limbs_.back() >> top) & 1)) --top;
    return int(64 * (limbs_.size() - 1)) + top + 1;
  }
  bool bit(int i) const {
    size_t l = size_t(i) / 64;
    if (l >= limbs_.size()) return false;
    return (limbs_[l] >> (i % 64)) & 1;
  }
  void set_bit(int i) {
    size_t l = size_t(i) / 64;
    if (l >= limbs_.size()) limbs_.resize(l + 1, 0);
    limbs_[l] |= uint64_t(1) << (i % 64);
  }
  void set_bit0() { set_bit(0); }
  BigUint shl1() const {
    BigUint r;
    r.limbs_.resize(limbs_.size() + 1, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i] |= limbs_[i] << 1;
      r.limbs_[i + 1] = limbs_[i] >> 63;
    }
    r.trim();
    return r;
  }
};

}  // namespace cliffcom
