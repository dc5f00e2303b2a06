#include "cliffcom/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cliffcom/acceptance.hpp"
#include "cliffcom/errors.hpp"
#include "cliffcom/json_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cliffcom::cli {

namespace {

void write_output(const std::string &path, const std::string &content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << content;
}

io::ordered_json read_json(const std::string &path) {
  if (path.empty()) throw ParseError("--in <path> is required");
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open input file " + path);
  return io::ordered_json::parse(f);
}

std::pair<int, int> parse_shard(const std::string &s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw ParseError("--shard expects i/m");
  return {std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1))};
}

}  // namespace

int run(const std::vector<std::string> &args) {
  CLI::App app{"Clifford commutant toolkit"};
  app.require_subcommand(1);

  int n = 1, k = 4, q = 2;
  int workers = 0;
  uint64_t seed = 0;
  double tol = 1e-10;
  std::string shard = "0/1", out, format = "plain", input;
  int dense_cap_override = 0;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("-n,--n", n, "qudit count");
    cmd->add_option("-k,--k", k, "tensor copies");
    cmd->add_option("-q,--q", q, "prime local dimension");
    cmd->add_option("--workers", workers, "worker threads (0 = default)");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--tol", tol, "tolerance override");
    cmd->add_option("--shard", shard, "shard index/count, e.g. 0/4");
    cmd->add_option("--dense-cap", dense_cap_override, "dense dimension cap override");
    cmd->add_option("--out", out, "output path (default stdout)");
    cmd->add_option("--format", format, "plain|json|csv");
  };

  auto *cmd_dim = app.add_subcommand("dim", "commutant dimension report");
  add_common(cmd_dim);

  auto *cmd_enum = app.add_subcommand("enumerate", "enumerate basis classes [V,G]");
  add_common(cmd_enum);

  auto *cmd_basis = app.add_subcommand("basis", "emit mho_I / Omega basis descriptions");
  add_common(cmd_basis);
  std::string basis_kind = "mho";
  int basis_terms = 0;
  cmd_basis->add_option("--kind", basis_kind, "mho|omega");
  cmd_basis->add_option("--terms", basis_terms, "also stream this many (Pauli, phi) terms per class");

  auto *cmd_gram = app.add_subcommand("gram", "symbolic Gram matrix of the reduced-monomial basis");
  add_common(cmd_gram);

  auto *cmd_wg = app.add_subcommand("weingarten", "Clifford-Weingarten (pseudo-)inverse at d = q^n");
  add_common(cmd_wg);

  auto *cmd_twirl = app.add_subcommand("twirl", "exact Clifford twirl of a matrix (or Haar with --haar)");
  add_common(cmd_twirl);
  bool twirl_haar = false;
  cmd_twirl->add_option("--in", input, "matrix JSON input path");
  cmd_twirl->add_flag("--haar", twirl_haar, "unitary-group twirl instead of Clifford");

  auto *cmd_rewrite = app.add_subcommand("rewrite", "apply GL moves / reduce / normal form to a monomial");
  add_common(cmd_rewrite);
  bool op_reduce = false, op_normal = false, op_canonical = false;
  std::string gl_text;
  cmd_rewrite->add_option("--in", input, "monomial JSON input path");
  cmd_rewrite->add_flag("--reduce", op_reduce, "reduce to full column rank");
  cmd_rewrite->add_flag("--normal-form", op_normal, "projective x unitary factorization");
  cmd_rewrite->add_flag("--canonical", op_canonical, "canonical gauge representative");
  cmd_rewrite->add_option("--apply-gl", gl_text, "column transform in matrix text encoding");

  auto *cmd_magic = app.add_subcommand("magic", "magic report for a named state");
  add_common(cmd_magic);
  std::string state_name = "T";
  cmd_magic->add_option("--state", state_name, "T|zero|random");

  auto *cmd_table = app.add_subcommand("table", "two-sided permutation class table");
  add_common(cmd_table);

  auto *cmd_verify = app.add_subcommand("verify", "run the acceptance suite tier by tier");
  add_common(cmd_verify);
  std::string only;
  bool skip_k8 = false;
  cmd_verify->add_option("--only", only, "comma-separated criterion ids");
  cmd_verify->add_flag("--skip-k8", skip_k8, "skip the long-running k=8 table tier");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#endif
    if (dense_cap_override > 0) dense::set_dense_cap(dense_cap_override);

    if (*cmd_dim) {
      auto rep = comm::dimension(n, k, q);
      if (format == "json") {
        write_output(out, io::dump(io::count_report_to_json(rep)));
      } else if (format == "csv") {
        write_output(out, io::count_report_to_csv(rep));
      } else {
        write_output(out, rep.total.to_string() + "\n");
      }
      return 0;
    }
    if (*cmd_enum) {
      auto [si, sc] = parse_shard(shard);
      std::string buf;
      if (format == "csv") buf = "k,m,V,G\n";
      comm::enumerate_classes_visit(n, k, q,
                                    [&](const comm::CommClass &c) {
                                      if (format == "csv") {
                                        std::string cols;
                                        for (int j = 0; j < c.m(); ++j) {
                                          if (j) cols.push_back(' ');
                                          for (int r = 0; r < c.k; ++r) cols.push_back(char('0' + c.V.at(r, j)));
                                        }
                                        buf += std::to_string(c.k) + "," + std::to_string(c.m()) + "," + cols +
                                               "," + c.G.to_string() + "\n";
                                      } else {
                                        buf += io::class_to_json(c).dump() + "\n";
                                      }
                                    },
                                    si, sc);
      write_output(out, buf);
      return 0;
    }
    if (*cmd_basis) {
      std::string buf;
      if (basis_kind == "omega") {
        for (const auto &m : comm::reduced_monomial_basis(k, q)) buf += io::monomial_to_json(m).dump() + "\n";
      } else {
        comm::enumerate_classes_visit(n, k, q, [&](const comm::CommClass &c) {
          io::ordered_json j = io::class_to_json(c);
          j["orbit_size"] = comm::orbit_size(c, n).to_string();
          if (basis_terms > 0) {
            io::ordered_json terms = io::ordered_json::array();
            comm::MhoCoefficients gen(c, n);
            pauli::PauliTensor t;
            pauli::Phase phi;
            for (int cnt = 0; cnt < basis_terms && gen.next(t, phi); ++cnt) {
              io::ordered_json term;
              term["pauli"] = pauli::format_tensor(t);
              term["phi"] = phi.to_string();
              terms.push_back(term);
            }
            j["terms"] = terms;
            j["normalization"] = gen.normalization().to_string();
          }
          buf += j.dump() + "\n";
        });
      }
      write_output(out, buf);
      return 0;
    }
    if (*cmd_gram) {
      auto basis = comm::reduced_monomial_basis(k, q);
      write_output(out, io::dump(io::gram_to_json(comm::gram(basis), k, q)));
      return 0;
    }
    if (*cmd_wg) {
      auto basis = comm::reduced_monomial_basis(k, q);
      auto g = comm::gram(basis);
      auto w = comm::weingarten(g, std::pow(double(q), n));
      write_output(out, io::dump(io::weingarten_to_json(w, g, n, k, q)));
      return 0;
    }
    if (*cmd_twirl) {
      dense::DenseOperator o = io::matrix_from_json(read_json(input));
      o.n = n;
      o.k = k;
      o.q = q;
      uint64_t want = 1;
      for (int i = 0; i < n * k; ++i) want *= uint64_t(q);
      if (uint64_t(o.dim) != want) throw ShapeMismatch("matrix dimension does not match q^{nk}");
      dense::DenseOperator r = twirl_haar ? dense::haar_twirl(o) : dense::exact_twirl(o);
      write_output(out, io::dump(io::matrix_to_json(r)));
      return 0;
    }
    if (*cmd_rewrite) {
      mono::Monomial m = io::monomial_from_json(read_json(input));
      io::ordered_json j;
      if (op_reduce) {
        auto r = mono::reduce(m);
        j["dpower"] = r.dpower;
        j["beta"] = r.beta;
        j["monomial"] = io::monomial_to_json(r.reduced);
      } else if (op_normal) {
        auto f = mono::normal_form(m);
        j["projective"] = io::monomial_to_json(f.projective);
        j["unitary"] = io::monomial_to_json(f.unitary);
      } else if (op_canonical) {
        j["monomial"] = io::monomial_to_json(mono::canonical(m));
        j["order"] = mono::order(m);
        j["class"] = mono::to_string(mono::classify(m));
        j["trace_exponent"] = mono::trace_exponent(m);
      } else if (!gl_text.empty()) {
        gf::FMatrix a = gf::FMatrix::from_string(m.q, gl_text);
        gf::GLTransform t{a, gf::invert(a)};
        j["monomial"] = io::monomial_to_json(mono::apply_gl(m, t));
      } else {
        throw ParseError("rewrite needs one of --reduce/--normal-form/--canonical/--apply-gl");
      }
      write_output(out, io::dump(j));
      return 0;
    }
    if (*cmd_magic) {
      dense::StateVector s;
      if (state_name == "T") {
        s = dense::t_state(n);
      } else if (state_name == "zero") {
        s = dense::zero_state(n);
      } else if (state_name == "random") {
        s = dense::random_state(n, seed);
      } else {
        throw ParseError("unknown state '" + state_name + "'");
      }
      magic::MagicReport rep = magic::magic_report(s, state_name, seed);
      rep.tol = tol;
      io::ordered_json j = io::magic_report_to_json(rep);
      if (n <= 2) {
        for (int kk : {4, 5, 6}) {
          auto p = magic::state_orbit(s, kk);
          io::ordered_json arr = io::ordered_json::array();
          for (double v : p) arr.push_back(io::format_double(v));
          j["orbit_k" + std::to_string(kk)] = arr;
        }
      }
      write_output(out, io::dump(j));
      return 0;
    }
    if (*cmd_table) {
      auto t = comm::class_table(k, q);
      if (format == "csv") {
        write_output(out, io::class_table_to_csv(t));
      } else {
        write_output(out, io::dump(io::class_table_to_json(t)));
      }
      return 0;
    }
    if (*cmd_verify) {
      accept::Options opt;
      opt.skip_k8 = skip_k8;
      if (!only.empty()) {
        std::stringstream ss(only);
        std::string tok;
        while (std::getline(ss, tok, ',')) opt.only.push_back(std::stoi(tok));
      }
      bool all_pass = true;
      for (const auto &r : accept::run(opt)) {
        std::printf("%s criterion %2d: %s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cliffcom::cli
