#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "cli_config.hpp"
#include "doctest.h"

using namespace rabi::cli;
using nlohmann::json;

namespace {

std::string field_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

json minimal() {
  return json{{"mode", "spectrum-scan"}, {"grid", {{"axis", "g1"}, {"lo", 0.0}, {"hi", 1.0}, {"count", 5}}}};
}

}  // namespace

TEST_CASE("ranges") {
  const auto r = parse_range("0:1.2:240", "x");
  CHECK(r.lo == 0.0);
  CHECK(r.hi == 1.2);
  CHECK(r.count == 240);
  const auto v = r.values();
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.2);
  CHECK(v.size() == 240);
  CHECK_THROWS_AS(parse_range("0:1", "x"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:2:3", "x"), ConfigError);
  CHECK_THROWS_AS(parse_range("a:1:2", "x"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:2.5", "x"), ConfigError);
}

TEST_CASE("validation names the offending field") {
  CHECK(field_of(minimal()) == "");
  auto j = minimal();
  j["mode"] = "nonsense";
  CHECK(field_of(j) == "mode");
  j = minimal();
  j.erase("mode");
  CHECK(field_of(j) == "mode");
  j = minimal();
  j["grid"]["count"] = 1;
  CHECK(field_of(j) == "grid.count");
  j = minimal();
  j["grid"]["axis"] = "omega";
  CHECK(field_of(j) == "grid.axis");
  j = minimal();
  j.erase("grid");
  CHECK(field_of(j) == "grid");
  j = minimal();
  j["format"] = "xml";
  CHECK(field_of(j) == "format");
  j = minimal();
  j["params"] = {{"g1", -1.0}};
  CHECK(field_of(j) == "params.g1");
  j = minimal();
  j["params"] = {{"omega", "one"}};
  CHECK(field_of(j) == "params.omega");
  j = minimal();
  j["n_keep"] = 0;
  CHECK(field_of(j) == "n_keep");
  j = minimal();
  j["colour"] = 1;
  CHECK(field_of(j) == "colour");
  j = minimal();
  j["mode"] = "crossing-count";
  CHECK(field_of(j) == "grid.axis");
  j = minimal();
  j["mode"] = "exceptional";
  j["search_axis"] = "g1";
  CHECK(field_of(j) == "search_axis");
}

TEST_CASE("defaults and round trip through JSON") {
  auto c = config_from_json(minimal());
  CHECK(c.format == "csv");
  CHECK(c.n_max == 200);
  CHECK(c.search_axis == "g2");
  json j = json::parse(c.to_json().dump());
  const auto d = config_from_json(j);
  CHECK(d.to_json() == c.to_json());
}

TEST_CASE("command line flags") {
  ScanConfig c;
  REQUIRE(parse_args({"--mode", "exceptional", "--n", "0", "--omega", "1", "--omega0", "1", "--g2-range", "0:1:50"}, c));
  CHECK(c.mode == "exceptional");
  CHECK(c.axis == "g2");
  CHECK(c.range.count == 50);
  CHECK(c.search_axis == "g1");
  CHECK_THROWS_AS(parse_args({"--mode", "spectrum-scan", "--g1-range", "0:1:3", "--g2-range", "0:1:3"}, c),
                  ConfigError);
  CHECK_THROWS_AS(parse_args({"--mode", "spectrum-scan"}, c), ConfigError);
  CHECK_THROWS_AS(parse_args({"--bogus"}, c), ConfigError);
}

TEST_CASE("flags override the config file; env var supplies threads") {
  const std::string path = "test_cli_config_tmp.json";
  {
    std::ofstream f(path);
    f << R"({"mode": "weak-compare", "params": {"g2": 0.056, "omega0": 1},
             "grid": {"axis": "g1", "lo": 0, "hi": 1.2, "count": 11}, "n_keep": 4})";
  }
  ::setenv("RABI_SPECTRA_THREADS", "3", 1);
  ScanConfig c;
  REQUIRE(parse_args({"--config", path, "--n-keep", "6", "--format", "json"}, c));
  CHECK(c.mode == "weak-compare");
  CHECK(c.params.g2 == 0.056);
  CHECK(c.n_keep == 6);
  CHECK(c.format == "json");
  CHECK(c.threads == 3);
  REQUIRE(parse_args({"--config", path, "--threads", "2"}, c));
  CHECK(c.threads == 2);
  ::setenv("RABI_SPECTRA_THREADS", "many", 1);
  CHECK_THROWS_AS(parse_args({"--config", path}, c), ConfigError);
  ::unsetenv("RABI_SPECTRA_THREADS");
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_args({"--config", "/nonexistent/x.json"}, c), ConfigError);
}
