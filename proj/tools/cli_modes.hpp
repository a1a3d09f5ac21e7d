#pragma once

#include <string>
#include <vector>

#include "cli_config.hpp"

namespace rabi::cli {

// Wraps a library error with the grid point / mode where it happened.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // NaN = not available
  std::vector<std::string> warnings;
  bool unverified = false;  // an exceptional point failed the fock check
};

Table run_mode(const ScanConfig& c);

// CSV: '# {config, meta}' line, header, rows (%.17g). JSON: {config, rows, meta}.
std::string render(const ScanConfig& c, const Table& t);

// 0 ok, 2 config, 3 compute, 4 verification failure.
int run(const std::vector<std::string>& args);

}  // namespace rabi::cli
