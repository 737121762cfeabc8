#include <vector>
#include <string>

#include "nslab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nslab::run_cli(args);
}
