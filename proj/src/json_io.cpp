#include "cliffcom/json_io.hpp"

#include <cstdio>

#include "cliffcom/errors.hpp"

namespace cliffcom::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json monomial_to_json(const mono::Monomial &m) {
  ordered_json j;
  j["k"] = m.k;
  j["q"] = m.q;
  ordered_json cols = ordered_json::array();
  for (int c = 0; c < m.m(); ++c) {
    std::string s;
    for (int r = 0; r < m.k; ++r) s.push_back(char('0' + m.V.at(r, c)));
    cols.push_back(s);
  }
  j["V"] = cols;
  ordered_json phases = ordered_json::array();
  for (int i = 0; i < m.m(); ++i)
    for (int l = i + 1; l < m.m(); ++l) {
      if (!m.M.at(i, l)) continue;
      if (m.q == 2) {
        phases.push_back(ordered_json::array({i + 1, l + 1}));
      } else {
        phases.push_back(ordered_json::array({i + 1, l + 1, m.M.at(i, l)}));
      }
    }
  j["M"] = phases;
  return j;
}

mono::Monomial monomial_from_json(const ordered_json &j) {
  int k = j.at("k").get<int>();
  int q = j.contains("q") ? j.at("q").get<int>() : 2;
  const auto &cols = j.at("V");
  int m = int(cols.size());
  gf::FMatrix v(q, k, m);
  for (int c = 0; c < m; ++c) {
    std::string s = cols[size_t(c)].get<std::string>();
    if (int(s.size()) != k) throw ParseError("monomial column length != k");
    for (int r = 0; r < k; ++r) v.set(r, c, s[size_t(r)] - '0');
  }
  gf::FMatrix mm(q, m, m);
  for (const auto &p : j.at("M")) {
    int a = p.at(0).get<int>() - 1;
    int b = p.at(1).get<int>() - 1;
    int val = p.size() > 2 ? p.at(2).get<int>() : 1;
    if (a < 0 || b < 0 || a >= m || b >= m || a >= b) throw ParseError("bad phase index pair");
    mm.set(a, b, val);
    mm.set(b, a, q == 2 ? val : (q - val) % q);
  }
  return mono::Monomial(k, q, v, mm);
}

ordered_json class_to_json(const comm::CommClass &c) {
  ordered_json j;
  j["k"] = c.k;
  if (c.q != 2) j["q"] = c.q;
  j["m"] = c.m();
  ordered_json cols = ordered_json::array();
  for (int col = 0; col < c.m(); ++col) {
    std::string s;
    for (int r = 0; r < c.k; ++r) s.push_back(char('0' + c.V.at(r, col)));
    cols.push_back(s);
  }
  j["V"] = cols;
  j["G"] = c.G.to_string();
  return j;
}

comm::CommClass class_from_json(const ordered_json &j) {
  comm::CommClass c;
  c.k = j.at("k").get<int>();
  c.q = j.contains("q") ? j.at("q").get<int>() : 2;
  const auto &cols = j.at("V");
  int m = int(cols.size());
  c.V = gf::FMatrix(c.q, c.k, m);
  for (int col = 0; col < m; ++col) {
    std::string s = cols[size_t(col)].get<std::string>();
    for (int r = 0; r < c.k; ++r) c.V.set(r, col, s[size_t(r)] - '0');
  }
  c.G = m ? gf::FMatrix::from_string(c.q, j.at("G").get<std::string>()) : gf::FMatrix(c.q, 0, 0);
  return c;
}

ordered_json count_report_to_json(const comm::CountReport &r) {
  ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["q"] = r.q;
  ordered_json rows = ordered_json::array();
  for (const auto &row : r.rows) {
    ordered_json jr;
    jr["m"] = row.m;
    jr["r"] = row.r;
    jr["count"] = row.count.to_string();
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["total"] = r.total.to_string();
  return j;
}

std::string count_report_to_csv(const comm::CountReport &r) {
  std::string s = "m,r,count\n";
  for (const auto &row : r.rows)
    s += std::to_string(row.m) + "," + std::to_string(row.r) + "," + row.count.to_string() + "\n";
  s += "total,," + r.total.to_string() + "\n";
  return s;
}

ordered_json gram_to_json(const comm::GramMatrix &g, int k, int q) {
  ordered_json j;
  j["k"] = k;
  j["q"] = q;
  j["entries"] = "d_exponents";
  ordered_json basis = ordered_json::array();
  for (const auto &b : g.basis) basis.push_back(monomial_to_json(b));
  j["basis"] = basis;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < g.nb(); ++i) {
    ordered_json row = ordered_json::array();
    for (int l = 0; l < g.nb(); ++l) row.push_back(g.at(i, l));
    rows.push_back(row);
  }
  j["gram"] = rows;
  return j;
}

ordered_json weingarten_to_json(const comm::WeingartenMatrix &w, const comm::GramMatrix &g, int n, int k, int q) {
  ordered_json j;
  j["n"] = n;
  j["k"] = k;
  j["q"] = q;
  j["d"] = format_double(w.d);
  j["pseudo_inverse"] = w.pseudo_inverse;
  j["ill_conditioned"] = w.ill_conditioned;
  j["rank"] = w.rank;
  ordered_json basis = ordered_json::array();
  for (const auto &b : g.basis) basis.push_back(monomial_to_json(b));
  j["basis"] = basis;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < w.nb; ++i) {
    ordered_json row = ordered_json::array();
    for (int l = 0; l < w.nb; ++l) row.push_back(format_double(w.winv[size_t(i) * w.nb + l]));
    rows.push_back(row);
  }
  j["winv"] = rows;
  return j;
}

ordered_json matrix_to_json(const dense::DenseOperator &o) {
  ordered_json j;
  j["dim"] = o.dim;
  ordered_json re = ordered_json::array(), im = ordered_json::array();
  for (const auto &v : o.a) {
    re.push_back(format_double(v.real()));
    im.push_back(format_double(v.imag()));
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

dense::DenseOperator matrix_from_json(const ordered_json &j) {
  int dim = j.at("dim").get<int>();
  dense::DenseOperator o(dim, 0, 1, 2);
  const auto &re = j.at("re");
  const auto &im = j.at("im");
  if (int(re.size()) != dim * dim || int(im.size()) != dim * dim) throw ParseError("matrix entry count mismatch");
  for (size_t i = 0; i < o.a.size(); ++i) {
    auto grab = [](const ordered_json &x) {
      return x.is_string() ? std::stod(x.get<std::string>()) : x.get<double>();
    };
    o.a[i] = dense::cplx(grab(re[i]), grab(im[i]));
  }
  return o;
}

ordered_json magic_report_to_json(const magic::MagicReport &r) {
  ordered_json j;
  j["state"] = r.state_name;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["tolerance"] = format_double(r.tol);
  ordered_json pur, ent;
  for (auto [alpha, v] : r.purities) pur["alpha" + std::to_string(alpha)] = format_double(v);
  for (auto [alpha, v] : r.entropies) ent["alpha" + std::to_string(alpha)] = format_double(v);
  j["stabilizer_purities"] = pur;
  j["stabilizer_entropies"] = ent;
  ordered_json gen;
  for (const auto &[name, v] : r.generalized) gen[name] = format_double(v);
  j["generalized_purities"] = gen;
  j["generalized_purity_status"] = "measure";  // monotonicity is open for non-primitive monomials
  j["bell_magic"] = format_double(r.bell);
  j["testing_success"] = format_double(r.p_succ);
  return j;
}

ordered_json class_table_to_json(const comm::PermClassTable &t) {
  ordered_json j;
  j["k"] = t.k;
  ordered_json rows = ordered_json::array();
  for (const auto &r : t.rows) {
    ordered_json jr;
    jr["name"] = r.name;
    jr["rep"] = monomial_to_json(r.rep);
    jr["size"] = r.size.to_string();
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["total"] = t.total.to_string();
  return j;
}

std::string class_table_to_csv(const comm::PermClassTable &t) {
  std::string s = "name,size\n";
  for (const auto &r : t.rows) s += r.name + "," + r.size.to_string() + "\n";
  s += "total," + t.total.to_string() + "\n";
  return s;
}

std::string dump(const ordered_json &j) { return j.dump(2) + "\n"; }

}  // namespace cliffcom::io
