#include <string>
#include <vector>

#include "popdiff/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return popdiff::cli::run_cli(std::move(args));
}
