#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cliffcom::accept {

struct Options {
  std::vector<int> only;  // empty = all
  bool skip_k8 = false;   // gate for the long-running k=8 table tier
};

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string &)> run;
};

const std::vector<Criterion> &criteria();
std::vector<Result> run(const Options &opt);

}  // namespace cliffcom::accept
