#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rabi/core.hpp"

namespace rabi::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& msg)
      : std::runtime_error("config error in '" + field + "': " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Range {
  double lo = 0, hi = 1;
  int count = 2;
  std::vector<double> values() const;  // inclusive endpoints
};

// "lo:hi:count"
Range parse_range(const std::string& s, const std::string& field);

const std::vector<std::string>& modes();

struct ScanConfig {
  std::string mode;
  ModelParams params{1.0, 1.0, 0.0, 0.0};
  std::string axis;  // g1 | g2 | omega0
  Range range;
  int n_max = tol::default_n_max;
  int n_keep = 6;
  int n = 0;            // exceptional: integer energy
  int n_max_level = 7;  // crossing-count, rabi-markers: highest n / degree
  int threads = 0;      // not part of the embedded config (does not change results)
  bool raw_energy = false;
  std::string output;   // empty or "-" = stdout
  std::string format = "csv";
  std::string search_axis;  // exceptional: free parameter, default g1 (g2 if the grid is g1)
  double search_max = 5.0;
  bool measure = true;  // crossing-count: also count crossings in fock scans

  nlohmann::ordered_json to_json() const;
};

// Validates everything; throws ConfigError naming the field.
ScanConfig config_from_json(const nlohmann::json& j);

// Flags override --config; RABI_SPECTRA_THREADS is the fallback for --threads.
// Returns false (after printing) for --help.
bool parse_args(const std::vector<std::string>& args, ScanConfig& out);

}  // namespace rabi::cli
