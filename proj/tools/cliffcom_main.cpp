#include <vector>

#include "cliffcom/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cliffcom::cli::run(args);
}
