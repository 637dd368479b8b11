#include <string>
#include <vector>

#include "ismpath/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ismpath::run_cli(args);
}
