#include <string>
#include <vector>

#include "mixkern/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mixkern::run_cli(args);
}
