#include <string>
#include <vector>

#include "cli_modes.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rabi::cli::run(args);
}
