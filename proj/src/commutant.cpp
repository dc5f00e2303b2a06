#include "cliffcom/commutant.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "cliffcom/errors.hpp"
#include "cliffcom/linalg.hpp"

namespace cliffcom::comm {

namespace {

BigUint qpow(int q, uint64_t e) { return BigUint::pow(BigUint(uint64_t(q)), e); }

uint64_t u64pow(uint64_t q, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= q;
  return r;
}

}  // namespace

BigUint gaussian_binomial(int top, int m, int q) {
  if (m < 0 || m > top) return BigUint(0);
  BigUint num(1), den(1);
  for (int j = 1; j <= m; ++j) {
    num = num * (qpow(q, uint64_t(top - j + 1)) - BigUint(1));
    den = den * (qpow(q, uint64_t(j)) - BigUint(1));
  }
  BigUint quot, rem;
  BigUint::divmod(num, den, quot, rem);
  if (!rem.is_zero()) throw std::logic_error("gaussian_binomial: non-exact division");
  return quot;
}

BigUint antisym_rank_count(int m, int r, int q) {
  if (r == 0) return BigUint(1);
  if (2 * r > m) return BigUint(0);
  BigUint num = qpow(q, uint64_t(r) * uint64_t(r - 1));
  for (int i = 0; i <= 2 * r - 1; ++i) num = num * (qpow(q, uint64_t(m - i)) - BigUint(1));
  BigUint den(1);
  for (int i = 1; i <= r; ++i) den = den * (qpow(q, uint64_t(2 * i)) - BigUint(1));
  BigUint quot, rem;
  BigUint::divmod(num, den, quot, rem);
  if (!rem.is_zero()) throw std::logic_error("antisym_rank_count: non-exact division");
  return quot;
}

CountReport dimension(int n, int k, int q) {
  if (n < 1 || k < 1) throw BadShape("dimension: n, k >= 1");
  CountReport rep;
  rep.n = n;
  rep.k = k;
  rep.q = q;
  rep.total = BigUint(0);
  for (int m = 0; m <= k - 1; ++m) {
    BigUint subspaces = gaussian_binomial(k - 1, m, q);
    for (int r = std::max(m - n, 0); 2 * r <= m; ++r) {
      BigUint c = subspaces * antisym_rank_count(m, r, q);
      if (c.is_zero()) continue;
      rep.rows.push_back({m, r, c});
      rep.total = rep.total + c;
    }
  }
  return rep;
}

BigUint closed_product_form(int k) {
  BigUint p(1);
  for (int i = 0; i <= k - 2; ++i) p = p * (qpow(2, uint64_t(i)) + BigUint(1));
  return p;
}

BigUint reduced_monomial_count(int k, int q) {
  BigUint total(0);
  for (int m = 0; m <= k - 1; ++m)
    total = total + gaussian_binomial(k - 1, m, q) * qpow(q, uint64_t(m) * uint64_t(m - 1) / 2);
  return total;
}

namespace {

// All reduced-column-echelon k x m bases whose columns sum to zero mod q,
// i.e. one canonical basis per even m-dimensional subspace. Deterministic
// order: pivot-row combinations lexicographically, then the free cells as a
// base-q odometer in row-major order.
void enumerate_echelon_even(int k, int m, int q, const std::function<void(const gf::FMatrix &)> &fn) {
  if (m == 0) {
    fn(gf::FMatrix(q, k, 0));
    return;
  }
  if (m > k) return;
  std::vector<int> piv(size_t(m), 0);
  std::iota(piv.begin(), piv.end(), 0);
  for (;;) {
    std::vector<bool> is_piv(size_t(k), false);
    for (int j = 0; j < m; ++j) is_piv[size_t(piv[size_t(j)])] = true;
    std::vector<std::pair<int, int>> free_cells;  // (row, col)
    for (int i = 0; i < k; ++i) {
      if (is_piv[size_t(i)]) continue;
      for (int j = 0; j < m; ++j)
        if (i > piv[size_t(j)]) free_cells.emplace_back(i, j);
    }
    std::vector<int> vals(free_cells.size(), 0);
    for (;;) {
      gf::FMatrix v(q, k, m);
      for (int j = 0; j < m; ++j) v.set(piv[size_t(j)], j, 1);
      for (size_t c = 0; c < free_cells.size(); ++c)
        v.set(free_cells[c].first, free_cells[c].second, vals[c]);
      bool even = true;
      for (int j = 0; j < m && even; ++j) even = v.col_sum_mod(j) == 0;
      if (even) fn(v);
      size_t pos = free_cells.size();
      while (pos > 0) {
        if (++vals[pos - 1] < q) break;
        vals[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
    // next pivot combination
    int j = m - 1;
    while (j >= 0 && piv[size_t(j)] == k - m + j) --j;
    if (j < 0) break;
    ++piv[size_t(j)];
    for (int l = j + 1; l < m; ++l) piv[size_t(l)] = piv[size_t(l - 1)] + 1;
  }
}

void enumerate_graphs(int m, int q, const std::function<void(const gf::FMatrix &)> &fn) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::vector<int> vals(pairs.size(), 0);
  for (;;) {
    gf::FMatrix g(q, m, m);
    for (size_t p = 0; p < pairs.size(); ++p) {
      g.set(pairs[p].first, pairs[p].second, vals[p]);
      g.set(pairs[p].second, pairs[p].first, q == 2 ? vals[p] : (q - vals[p]) % q);
    }
    fn(g);
    size_t pos = pairs.size();
    while (pos > 0) {
      if (++vals[pos - 1] < q) break;
      vals[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
}

}  // namespace

void enumerate_classes_visit(int n, int k, int q, const std::function<void(const CommClass &)> &fn,
                             int shard_index, int shard_count) {
  if (shard_count < 1 || shard_index < 0 || shard_index >= shard_count)
    throw BadShape("enumerate_classes: invalid shard");
  for (int m = 0; m <= std::min(k - 1, 2 * n); ++m) {
    uint64_t subspace_counter = 0;
    enumerate_echelon_even(k, m, q, [&](const gf::FMatrix &v) {
      bool mine = int(subspace_counter % uint64_t(shard_count)) == shard_index;
      ++subspace_counter;
      if (!mine) return;
      enumerate_graphs(m, q, [&](const gf::FMatrix &g) {
        if (gf::rank(g) < 2 * (m - n)) return;
        CommClass c;
        c.k = k;
        c.q = q;
        c.V = v;
        c.G = g;
        fn(c);
      });
    });
  }
}

std::vector<CommClass> enumerate_classes(int n, int k, int q, int shard_index, int shard_count) {
  std::vector<CommClass> out;
  enumerate_classes_visit(n, k, q, [&](const CommClass &c) { out.push_back(c); }, shard_index, shard_count);
  return out;
}

BigUint orbit_size(const CommClass &cls, int n) {
  const int q = cls.q;
  const int m = cls.m();
  const int r = cls.half_rank();
  if (n < m - r) throw Infeasible("orbit_size: rank_q(G) >= 2(m - n) violated");
  BigUint total(1);
  for (int i = 0; i < r; ++i) {
    total = total * (qpow(q, uint64_t(2 * (n - i))) - BigUint(1));
    total = total * qpow(q, uint64_t(2 * (n - i) - 1));
  }
  int nprime = n - r;
  for (int i = 0; i < m - 2 * r; ++i)
    total = total * (qpow(q, uint64_t(2 * nprime - i)) - qpow(q, uint64_t(i)));
  return total;
}

std::vector<pauli::PauliString> sample_class_member(const CommClass &cls, int n) {
  return pauli::sample_graph_realization(cls.G, n);
}

MhoCoefficients::MhoCoefficients(CommClass cls, int n) : cls_(std::move(cls)), n_(n) {
  if (2 * n * cls_.k * (cls_.q == 2 ? 1 : 2) > 40) throw TooLarge("mho coefficient stream too large");
  total_ = u64pow(uint64_t(cls_.q), 2 * n * cls_.k);
  norm_ = orbit_size(cls_, n);
}

bool MhoCoefficients::next(pauli::PauliTensor &tensor, pauli::Phase &phi) {
  const std::string want = cls_.key();
  for (; idx_ < total_;) {
    pauli::PauliTensor t = pauli::PauliTensor::from_index(cls_.q, n_, cls_.k, idx_++);
    auto ct = pauli::cycle_trace_phase(t);
    if (!ct.nonzero) continue;
    auto d = pauli::decompose_tensor(t);
    auto g = pauli::anticomm_graph(d.paulis, cls_.q);
    if (d.v.key() + g.g.key() != want) continue;
    tensor = t;
    phi = ct.phase;
    return true;
  }
  return false;
}

FourierSum fourier(const mono::Monomial &m) {
  FourierSum out;
  out.prefactor_exp = 0;
  enumerate_graphs(m.m(), m.q, [&](const gf::FMatrix &g) {
    int e = 0;
    for (int i = 0; i < m.m(); ++i)
      for (int j = i + 1; j < m.m(); ++j) e += g.at(i, j) * m.M.at(i, j);
    out.terms.push_back({g, ((e % m.q) + m.q) % m.q});
  });
  return out;
}

FourierSum inverse_fourier(const gf::FMatrix &v, const gf::FMatrix &g) {
  const int q = v.q();
  const int m = v.cols();
  FourierSum out;
  out.prefactor_exp = m * (m - 1) / 2;
  enumerate_graphs(m, q, [&](const gf::FMatrix &mm) {
    int e = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) e += g.at(i, j) * mm.at(i, j);
    out.terms.push_back({mm, ((-e % q) + q) % q});
  });
  return out;
}

std::vector<mono::Monomial> reduced_monomial_basis(int k, int q) {
  std::vector<mono::Monomial> out;
  for (int m = 0; m <= k - 1; ++m) {
    enumerate_echelon_even(k, m, q, [&](const gf::FMatrix &v) {
      enumerate_graphs(m, q, [&](const gf::FMatrix &mm) { out.emplace_back(k, q, v, mm); });
    });
  }
  return out;
}

namespace {

GramMatrix gram_impl(const std::vector<mono::Monomial> &basis, bool parallel) {
  GramMatrix g;
  g.basis = basis;
  const int nb = int(basis.size());
  g.expo.assign(size_t(nb) * nb, 0);
  std::vector<mono::Monomial> adj;
  adj.reserve(basis.size());
  for (const auto &b : basis) adj.push_back(mono::adjoint(b));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int i = 0; i < nb; ++i) {
    for (int j = i; j < nb; ++j) {
      auto prod = mono::multiply(adj[size_t(i)], basis[size_t(j)]);
      int e = prod.dpower + mono::trace_exponent(prod.reduced);
      g.expo[size_t(i) * nb + j] = e;
      g.expo[size_t(j) * nb + i] = e;
    }
  }
  return g;
}

}  // namespace

GramMatrix gram(const std::vector<mono::Monomial> &basis) { return gram_impl(basis, true); }
GramMatrix gram_serial(const std::vector<mono::Monomial> &basis) { return gram_impl(basis, false); }

WeingartenMatrix weingarten(const GramMatrix &g, double d, double cond_bound) {
  WeingartenMatrix w;
  w.nb = g.nb();
  w.d = d;
  const int nb = w.nb;
  int kexp = nb ? g.at(0, 0) : 0;  // diagonal exponent is k
  w.w.assign(size_t(nb) * nb, 0.0);
  std::vector<double> scaled(size_t(nb) * nb, 0.0);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      w.w[size_t(i) * nb + j] = std::pow(d, g.at(i, j));
      scaled[size_t(i) * nb + j] = std::pow(d, g.at(i, j) - kexp);
    }
  auto p = linalg::pinv_symmetric(scaled, nb, 1e-12);
  w.rank = p.rank;
  w.cond = p.cond;
  w.pseudo_inverse = p.rank < nb;
  w.ill_conditioned = p.cond > cond_bound;
  w.winv.assign(size_t(nb) * nb, 0.0);
  const double dk = std::pow(d, kexp);
  for (size_t i = 0; i < w.winv.size(); ++i) w.winv[i] = p.pinv[i] / dk;
  return w;
}

// ---- two-sided permutation class table ---------------------------------------

namespace {

struct Packed {
  uint64_t a = 0, b = 0;
  bool operator==(const Packed &o) const { return a == o.a && b == o.b; }
};

struct PackedHash {
  size_t operator()(const Packed &p) const {
    uint64_t h = p.a * 0x9e3779b97f4a7c15ULL ^ (p.b + 0x7f4a7c159e3779b9ULL);
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return size_t(h);
  }
};

Packed pack_monomial(const mono::Monomial &m) {
  if (m.q != 2 || m.k > 8 || m.m() > 8) throw TooLarge("pack_monomial: q=2, k<=8, m<=8 only");
  Packed p;
  for (int r = 0; r < m.k; ++r) {
    uint64_t row = 0;
    for (int j = 0; j < m.m(); ++j) row |= uint64_t(m.V.at(r, j)) << j;
    p.a |= row << (8 * r);
  }
  p.b = uint64_t(m.m());
  int bit = 4;
  for (int i = 0; i < m.m(); ++i)
    for (int j = i + 1; j < m.m(); ++j) p.b |= uint64_t(m.M.at(i, j)) << bit++;
  return p;
}

mono::Monomial unpack_monomial(const Packed &p, int k) {
  int m = int(p.b & 0xf);
  gf::FMatrix v(2, k, m), mm(2, m, m);
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < m; ++j) v.set(r, j, int((p.a >> (8 * r + j)) & 1));
  int bit = 4;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      int val = int((p.b >> bit++) & 1);
      mm.set(i, j, val);
      mm.set(j, i, val);
    }
  return mono::Monomial(k, 2, v, mm);
}

struct OrbitStats {
  uint64_t size = 0;
  mono::Monomial min_member;
  std::vector<int> min_weights;
  bool has_min = false;
};

void consider_min(OrbitStats &st, const mono::Monomial &m) {
  std::vector<int> w;
  for (int j = 0; j < m.m(); ++j) w.push_back(m.V.col_weight_int(j));
  std::sort(w.begin(), w.end());
  if (!st.has_min || w.size() < st.min_weights.size() ||
      (w.size() == st.min_weights.size() &&
       (w < st.min_weights || (w == st.min_weights && m.key() < st.min_member.key())))) {
    st.has_min = true;
    st.min_member = m;
    st.min_weights = w;
  }
}

std::string orbit_name(const OrbitStats &st) {
  if (st.min_weights.empty()) return "perms";
  std::string name = "Omega_";
  for (size_t i = 0; i < st.min_weights.size(); ++i) {
    if (i) name.push_back(',');
    name += std::to_string(st.min_weights[i]);
  }
  const mono::Monomial &m = st.min_member;
  if (m.m() >= 2) {
    std::vector<int> ov;
    for (int i = 0; i < m.m(); ++i)
      for (int j = i + 1; j < m.m(); ++j) ov.push_back(m.V.col_overlap_int(i, j));
    std::sort(ov.begin(), ov.end());
    name += "|ov";
    for (size_t i = 0; i < ov.size(); ++i) {
      if (i) name.push_back(',');
      name += std::to_string(ov[i]);
    }
  }
  return name;
}

// Grow the two-sided orbit of `seed` under left/right multiplication by
// adjacent swaps; members are canonical reduced monomials.
OrbitStats orbit_bfs(const mono::Monomial &seed, int k, int q,
                     std::unordered_set<Packed, PackedHash> *global_seen) {
  std::vector<mono::Monomial> swaps;
  for (int i = 0; i + 1 < k; ++i) swaps.push_back(mono::swap_monomial(k, q, i, i + 1));
  OrbitStats st;
  std::unordered_set<Packed, PackedHash> seen;
  std::vector<Packed> frontier;
  mono::Monomial start = mono::canonical(seed);
  Packed p0 = pack_monomial(start);
  seen.insert(p0);
  if (global_seen) {
    if (global_seen->count(p0)) throw BadShape("class_table: overlapping orbits");
    global_seen->insert(p0);
  }
  frontier.push_back(p0);
  consider_min(st, start);
  while (!frontier.empty()) {
    std::vector<Packed> next;
    for (const Packed &pk : frontier) {
      mono::Monomial cur = unpack_monomial(pk, k);
      for (const auto &sw : swaps) {
        for (int side = 0; side < 2; ++side) {
          auto prod = side == 0 ? mono::multiply(sw, cur) : mono::multiply(cur, sw);
          if (prod.dpower != 0) throw BadShape("class_table: unexpected d power in a permutation move");
          mono::Monomial can = mono::canonical(prod.reduced);
          Packed pc = pack_monomial(can);
          if (seen.insert(pc).second) {
            if (global_seen) global_seen->insert(pc);
            next.push_back(pc);
            consider_min(st, can);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  st.size = seen.size();
  return st;
}

}  // namespace

PermClassTable class_table(int k, int q) {
  PermClassTable table;
  table.k = k;
  table.total = BigUint(0);
  if (k <= 7) {
    auto basis = reduced_monomial_basis(k, q);
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i].key(), i);
    std::vector<bool> visited(basis.size(), false);
    std::vector<mono::Monomial> swaps;
    for (int i = 0; i + 1 < k; ++i) swaps.push_back(mono::swap_monomial(k, q, i, i + 1));
    for (size_t s = 0; s < basis.size(); ++s) {
      if (visited[s]) continue;
      OrbitStats st;
      std::vector<size_t> frontier{s};
      visited[s] = true;
      consider_min(st, basis[s]);
      uint64_t count = 1;
      while (!frontier.empty()) {
        std::vector<size_t> next;
        for (size_t cur : frontier) {
          for (const auto &sw : swaps) {
            for (int side = 0; side < 2; ++side) {
              auto prod = side == 0 ? mono::multiply(sw, basis[cur]) : mono::multiply(basis[cur], sw);
              mono::Monomial can = mono::canonical(prod.reduced);
              auto it = index.find(can.key());
              if (it == index.end()) throw BadShape("class_table: orbit left the enumerated basis");
              if (!visited[it->second]) {
                visited[it->second] = true;
                next.push_back(it->second);
                consider_min(st, basis[it->second]);
                ++count;
              }
            }
          }
        }
        frontier = std::move(next);
      }
      st.size = count;
      table.rows.push_back({orbit_name(st), st.has_min ? st.min_member : basis[s], BigUint(st.size)});
      table.total = table.total + BigUint(st.size);
    }
  } else if (k == 8 && q == 2) {
    auto col = [](std::vector<int> ones) {
      std::vector<int> v(8, 0);
      for (int i : ones) v[size_t(i - 1)] = 1;
      return v;
    };
    auto seed = [&](std::vector<std::vector<int>> cols) {
      gf::FMatrix v(2, 8, int(cols.size()));
      for (int j = 0; j < int(cols.size()); ++j)
        for (int r = 0; r < 8; ++r) v.set(r, j, cols[size_t(j)][size_t(r)]);
      return mono::Monomial(8, 2, v, gf::FMatrix(2, int(cols.size()), int(cols.size())));
    };
    std::vector<mono::Monomial> seeds;
    seeds.push_back(mono::Monomial::identity(8, 2));
    seeds.push_back(seed({col({1, 2, 3, 4})}));
    seeds.push_back(seed({col({1, 2, 3, 4, 5, 6})}));
    seeds.push_back(seed({col({1, 2, 3, 4, 5, 6, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({4, 5, 6, 7})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({5, 6, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4, 5, 6}), col({3, 4, 5, 6, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6}), col({5, 6, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6}), col({1, 3, 5, 7})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6}), col({1, 3, 7, 8})}));
    seeds.push_back(seed({col({1, 2, 3, 4}), col({3, 4, 5, 6}), col({3, 4, 7, 8}), col({1, 3, 5, 7})}));
    std::unordered_set<Packed, PackedHash> global_seen;
    global_seen.reserve(1 << 24);
    for (const auto &s : seeds) {
      OrbitStats st = orbit_bfs(s, k, q, &global_seen);
      table.rows.push_back({orbit_name(st), st.min_member, BigUint(st.size)});
      table.total = table.total + BigUint(st.size);
    }
  } else {
    throw UnsupportedK("class_table: k <= 7 generally, k = 8 for qubits");
  }
  return table;
}

}  // namespace cliffcom::comm
