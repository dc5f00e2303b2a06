#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cliffcom/cli.hpp"
#include "cliffcom/dense.hpp"
#include "cliffcom/json_io.hpp"

using cliffcom::cli::run;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string &name) { return "/tmp/cliffcom_test_" + name; }

}  // namespace

TEST_CASE("dim subcommand") {
  std::string out = tmp_path("dim.txt");
  CHECK(run({"dim", "-n", "3", "-k", "4", "--out", out}) == 0);
  CHECK(slurp(out) == "30\n");
  CHECK(run({"dim", "-n", "1", "-k", "1", "--out", out}) == 0);
  CHECK(slurp(out) == "1\n");
  CHECK(run({"dim", "-n", "2", "-k", "4", "--format", "json", "--out", out}) == 0);
  auto j = nlohmann::ordered_json::parse(slurp(out));
  CHECK(j["total"] == "29");
}

TEST_CASE("exit codes") {
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"dim", "--shard"}) == 2);
  // domain error: n must be >= 1
  CHECK(run({"dim", "-n", "0", "-k", "2", "--out", tmp_path("x.txt")}) == 1);
}

TEST_CASE("byte-identical output across runs with fixed seed") {
  std::string a = tmp_path("magic_a.json"), b = tmp_path("magic_b.json");
  CHECK(run({"magic", "--state", "random", "--n", "2", "--seed", "5", "--out", a}) == 0);
  CHECK(run({"magic", "--state", "random", "--n", "2", "--seed", "5", "--out", b}) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("stabilizer_purities") != std::string::npos);

  std::string c = tmp_path("magic_c.json");
  CHECK(run({"magic", "--state", "T", "--n", "1", "--out", c}) == 0);
  CHECK(slurp(c).find("0.74999999999999944") != std::string::npos);
}

TEST_CASE("sharded enumeration covers the full set") {
  std::string full = tmp_path("enum_full.jsonl");
  CHECK(run({"enumerate", "-n", "2", "-k", "4", "--out", full}) == 0);
  std::set<std::string> all;
  {
    std::ifstream f(full);
    std::string line;
    while (std::getline(f, line))
      if (!line.empty()) all.insert(line);
  }
  std::set<std::string> join;
  for (int s = 0; s < 3; ++s) {
    std::string part = tmp_path("enum_part.jsonl");
    CHECK(run({"enumerate", "-n", "2", "-k", "4", "--shard", std::to_string(s) + "/3", "--out", part}) == 0);
    std::ifstream f(part);
    std::string line;
    while (std::getline(f, line))
      if (!line.empty()) CHECK(join.insert(line).second);
  }
  CHECK(join == all);
  CHECK(all.size() == 29);
}

TEST_CASE("rewrite round trip") {
  std::string in = tmp_path("mono.json"), out = tmp_path("rewritten.json");
  {
    std::ofstream f(in);
    f << R"({"k":6,"q":2,"V":["111100","001111"],"M":[[1,2]]})";
  }
  CHECK(run({"rewrite", "--in", in, "--canonical", "--out", out}) == 0);
  auto j = nlohmann::ordered_json::parse(slurp(out));
  CHECK(j["order"] == 2);
  CHECK(j["class"] == "unitary");

  CHECK(run({"rewrite", "--in", in, "--normal-form", "--out", out}) == 0);
  auto jn = nlohmann::ordered_json::parse(slurp(out));
  CHECK(jn["projective"]["V"].size() == 0);
  CHECK(jn["unitary"]["V"].size() == 4);

  CHECK(run({"rewrite", "--in", in, "--out", out}) == 1);  // missing operation
}

TEST_CASE("twirl matrix json round trip") {
  using namespace cliffcom;
  dense::DenseOperator o = dense::dense_pauli(pauli::parse_tensor(2, "X|X|X|X"));
  std::string in = tmp_path("mat_in.json"), out = tmp_path("mat_out.json");
  {
    std::ofstream f(in);
    f << io::dump(io::matrix_to_json(o));
  }
  CHECK(run({"twirl", "-n", "1", "-k", "4", "--in", in, "--out", out}) == 0);
  dense::DenseOperator got = io::matrix_from_json(nlohmann::ordered_json::parse(slurp(out)));
  got.n = 1;
  got.k = 4;
  dense::DenseOperator want = dense::exact_twirl(o);
  CHECK(got.max_abs_diff(want) < 1e-12);
  // wrong dimension for (n, k) is a domain error
  CHECK(run({"twirl", "-n", "2", "-k", "4", "--in", in, "--out", out}) == 1);
}

TEST_CASE("basis and table subcommands") {
  std::string out = tmp_path("basis.jsonl");
  CHECK(run({"basis", "-n", "1", "-k", "2", "--terms", "4", "--out", out}) == 0);
  std::string text = slurp(out);
  CHECK(text.find("orbit_size") != std::string::npos);
  CHECK(text.find("phi") != std::string::npos);

  CHECK(run({"table", "-k", "4", "--format", "csv", "--out", out}) == 0);
  CHECK(slurp(out).find("Omega_4,6") != std::string::npos);
  CHECK(slurp(out).find("total,30") != std::string::npos);

  CHECK(run({"gram", "-k", "2", "--out", out}) == 0);
  auto j = nlohmann::ordered_json::parse(slurp(out));
  CHECK(j["gram"][0][0] == 2);
  CHECK(j["gram"][0][1] == 1);

  CHECK(run({"weingarten", "-n", "4", "-k", "2", "--out", out}) == 0);
  auto jw = nlohmann::ordered_json::parse(slurp(out));
  CHECK(jw["pseudo_inverse"] == false);
  // (1/(d^2-1)) with d = 16
  CHECK(std::stod(jw["winv"][0][0].get<std::string>()) == doctest::Approx(1.0 / 255.0).epsilon(1e-12));
}
