#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <tuple>

#include "CLI11.hpp"

namespace rabi::cli {

using nlohmann::json;

std::vector<double> Range::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
  return v;
}

Range parse_range(const std::string& s, const std::string& field) {
  const auto a = s.find(':'), b = s.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos || s.find(':', b + 1) != std::string::npos)
    throw ConfigError(field, "expected lo:hi:count, got '" + s + "'");
  Range r;
  try {
    size_t used = 0;
    const std::string p0 = s.substr(0, a), p1 = s.substr(a + 1, b - a - 1), p2 = s.substr(b + 1);
    r.lo = std::stod(p0, &used);
    if (used != p0.size()) throw std::invalid_argument(p0);
    r.hi = std::stod(p1, &used);
    if (used != p1.size()) throw std::invalid_argument(p1);
    r.count = std::stoi(p2, &used);
    if (used != p2.size()) throw std::invalid_argument(p2);
  } catch (const std::logic_error&) {
    throw ConfigError(field, "expected lo:hi:count, got '" + s + "'");
  }
  return r;
}

const std::vector<std::string>& modes() {
  static const std::vector<std::string> m{"spectrum-scan",  "exceptional",    "crossing-count",
                                          "weak-compare",   "strong-compare", "rabi-markers"};
  return m;
}

nlohmann::ordered_json ScanConfig::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["params"] = {{"omega", params.omega}, {"omega0", params.omega0}, {"g1", params.g1}, {"g2", params.g2}};
  j["grid"] = {{"axis", axis}, {"lo", range.lo}, {"hi", range.hi}, {"count", range.count}};
  j["n_max"] = n_max;
  j["n_keep"] = n_keep;
  j["n"] = n;
  j["n_max_level"] = n_max_level;
  j["raw_energy"] = raw_energy;
  j["output"] = output;
  j["format"] = format;
  j["search_axis"] = search_axis;
  j["search_max"] = search_max;
  j["measure"] = measure;
  return j;
}

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& path, T dflt) {
  if (!j.contains(key)) return dflt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + key, "wrong type");
  }
}

double finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

bool is_axis(const std::string& a) { return a == "g1" || a == "g2" || a == "omega0"; }

const char* known_keys[] = {"mode", "params", "grid", "n_max", "n_keep", "n", "n_max_level", "threads",
                            "raw_energy", "output", "format", "search_axis", "search_max", "measure"};

}  // namespace

ScanConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(std::begin(known_keys), std::end(known_keys), it.key()) == std::end(known_keys))
      throw ConfigError(it.key(), "unknown field");

  ScanConfig c;
  c.mode = get<std::string>(j, "mode", "", "");
  if (c.mode.empty()) throw ConfigError("mode", "required");
  if (std::find(modes().begin(), modes().end(), c.mode) == modes().end())
    throw ConfigError("mode", "unknown mode '" + c.mode + "'");

  const json pj = j.value("params", json::object());
  if (!pj.is_object()) throw ConfigError("params", "expected an object");
  c.params.omega = finite(get<double>(pj, "omega", "params.", 1.0), "params.omega");
  c.params.omega0 = finite(get<double>(pj, "omega0", "params.", 1.0), "params.omega0");
  c.params.g1 = finite(get<double>(pj, "g1", "params.", 0.0), "params.g1");
  c.params.g2 = finite(get<double>(pj, "g2", "params.", 0.0), "params.g2");
  if (!(c.params.omega > 0)) throw ConfigError("params.omega", "must be > 0");
  if (c.params.g1 < 0) throw ConfigError("params.g1", "must be >= 0");
  if (c.params.g2 < 0) throw ConfigError("params.g2", "must be >= 0");

  if (!j.contains("grid")) throw ConfigError("grid", "required (one of --g1-range, --g2-range, --omega0-range)");
  const json& g = j.at("grid");
  if (!g.is_object()) throw ConfigError("grid", "expected an object");
  c.axis = get<std::string>(g, "axis", "grid.", "");
  if (!is_axis(c.axis)) throw ConfigError("grid.axis", "must be one of g1, g2, omega0");
  c.range.lo = finite(get<double>(g, "lo", "grid.", 0.0), "grid.lo");
  c.range.hi = finite(get<double>(g, "hi", "grid.", 0.0), "grid.hi");
  c.range.count = get<int>(g, "count", "grid.", 0);
  if (c.range.count < 2) throw ConfigError("grid.count", "point count must be >= 2");
  if (!(c.range.hi > c.range.lo)) throw ConfigError("grid.hi", "must exceed grid.lo");
  if (c.axis != "omega0" && c.range.lo < 0) throw ConfigError("grid.lo", "couplings must be >= 0");

  c.n_max = get<int>(j, "n_max", "", c.n_max);
  if (c.n_max < 4 || c.n_max > 2000) throw ConfigError("n_max", "must be in [4, 2000]");
  c.n_keep = get<int>(j, "n_keep", "", c.n_keep);
  if (c.n_keep < 1 || c.n_keep > c.n_max + 1) throw ConfigError("n_keep", "must be in [1, n_max/2 + 1]");
  c.n = get<int>(j, "n", "", c.n);
  if (c.n < 0 || c.n > 40) throw ConfigError("n", "must be in [0, 40]");
  c.n_max_level = get<int>(j, "n_max_level", "", c.n_max_level);
  if (c.n_max_level < 0 || c.n_max_level > 40) throw ConfigError("n_max_level", "must be in [0, 40]");
  c.threads = get<int>(j, "threads", "", 0);
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  c.raw_energy = get<bool>(j, "raw_energy", "", false);
  c.output = get<std::string>(j, "output", "", "");
  c.format = get<std::string>(j, "format", "", "csv");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format", "must be csv or json");
  c.search_axis = get<std::string>(j, "search_axis", "", "");
  if (c.search_axis.empty()) c.search_axis = c.axis == "g1" ? "g2" : "g1";
  if (!is_axis(c.search_axis)) throw ConfigError("search_axis", "must be one of g1, g2, omega0");
  if (c.search_axis == c.axis) throw ConfigError("search_axis", "must differ from grid.axis");
  c.search_max = finite(get<double>(j, "search_max", "", 5.0), "search_max");
  if (!(c.search_max > 0)) throw ConfigError("search_max", "must be > 0");
  c.measure = get<bool>(j, "measure", "", true);

  if (c.mode == "crossing-count" && c.axis != "omega0") throw ConfigError("grid.axis", "crossing-count scans omega0");
  if (c.mode == "weak-compare" && c.axis == "omega0") throw ConfigError("grid.axis", "weak-compare scans g1 or g2");
  if (c.mode == "rabi-markers" && c.axis == "omega0")
    throw ConfigError("grid.axis", "rabi-markers takes the g = g1 = g2 interval from a g1 or g2 range");
  return c;
}

bool parse_args(const std::vector<std::string>& args, ScanConfig& out) {
  CLI::App app{"Spectra of the generalized Rabi model", "rabi_spectra"};
  std::string config_path, mode, g1r, g2r, w0r, format, output, search_axis;
  double omega = 0, omega0 = 0, g1 = 0, g2 = 0, search_max = 0;
  int n_max = 0, n_keep = 0, n = 0, n_max_level = 0, threads = 0;
  bool raw = false, no_measure = false;

  app.add_option("--config", config_path, "JSON ScanConfig file (flags override it)");
  app.add_option("--mode", mode, "spectrum-scan|exceptional|crossing-count|weak-compare|strong-compare|rabi-markers");
  auto* o_omega = app.add_option("--omega", omega, "boson frequency");
  auto* o_omega0 = app.add_option("--omega0", omega0, "half the two-level splitting");
  auto* o_g1 = app.add_option("--g1", g1, "co-rotating coupling");
  auto* o_g2 = app.add_option("--g2", g2, "counter-rotating coupling");
  app.add_option("--g1-range", g1r, "scan g1 over lo:hi:count");
  app.add_option("--g2-range", g2r, "scan g2 over lo:hi:count");
  app.add_option("--omega0-range", w0r, "scan omega0 over lo:hi:count");
  auto* o_nmax = app.add_option("--n-max", n_max, "Fock cutoff");
  auto* o_nkeep = app.add_option("--n-keep", n_keep, "levels per grid point");
  auto* o_n = app.add_option("--n", n, "integer energy of the exceptional point");
  auto* o_nml = app.add_option("--n-max-level", n_max_level, "highest n (crossing-count) or degree (rabi-markers)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (0 = hardware count)");
  app.add_flag("--raw-energy", raw, "emit E instead of the shifted epsilon");
  app.add_option("--output", output, "output file (default stdout)");
  app.add_option("--format", format, "csv|json");
  app.add_option("--search-axis", search_axis, "exceptional: free parameter (g1|g2|omega0)");
  auto* o_smax = app.add_option("--search-max", search_max, "exceptional: upper end of the search interval");
  app.add_flag("--no-measure", no_measure, "crossing-count: skip the fock scans");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return false;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("<args>", e.what());
  }

  json j = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("config", "cannot open '" + config_path + "'");
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  }
  if (!mode.empty()) j["mode"] = mode;
  if (*o_omega) j["params"]["omega"] = omega;
  if (*o_omega0) j["params"]["omega0"] = omega0;
  if (*o_g1) j["params"]["g1"] = g1;
  if (*o_g2) j["params"]["g2"] = g2;
  int nranges = 0;
  for (auto [flag, axis, txt] : {std::tuple{"--g1-range", "g1", &g1r}, std::tuple{"--g2-range", "g2", &g2r},
                                 std::tuple{"--omega0-range", "omega0", &w0r}}) {
    if (txt->empty()) continue;
    ++nranges;
    const Range r = parse_range(*txt, flag);
    j["grid"] = {{"axis", axis}, {"lo", r.lo}, {"hi", r.hi}, {"count", r.count}};
  }
  if (nranges > 1) throw ConfigError("grid", "give exactly one of --g1-range, --g2-range, --omega0-range");
  if (*o_nmax) j["n_max"] = n_max;
  if (*o_nkeep) j["n_keep"] = n_keep;
  if (*o_n) j["n"] = n;
  if (*o_nml) j["n_max_level"] = n_max_level;
  if (*o_threads) {
    j["threads"] = threads;
  } else if (!j.contains("threads")) {
    if (const char* env = std::getenv("RABI_SPECTRA_THREADS")) {
      try {
        size_t used = 0;
        j["threads"] = std::stoi(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::logic_error&) {
        throw ConfigError("RABI_SPECTRA_THREADS", "not an integer");
      }
    }
  }
  if (raw) j["raw_energy"] = true;
  if (!output.empty()) j["output"] = output;
  if (!format.empty()) j["format"] = format;
  if (!search_axis.empty()) j["search_axis"] = search_axis;
  if (*o_smax) j["search_max"] = search_max;
  if (no_measure) j["measure"] = false;
  out = config_from_json(j);
  return true;
}

}  // namespace rabi::cli
