#include <string>
#include <vector>

#include "semistable/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semistable::cli::run_cli(std::move(args));
}
