#include "cli_modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>

#include "rabi/bethe.hpp"
#include "rabi/fock.hpp"
#include "rabi/parallel.hpp"
#include "rabi/strongpert.hpp"
#include "rabi/weakpert.hpp"

namespace rabi::cli {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

ModelParams with_axis(ModelParams p, const std::string& axis, double v) {
  if (axis == "g1") p.g1 = v;
  else if (axis == "g2") p.g2 = v;
  else p.omega0 = v;
  return p;
}

bethe::Axis to_axis(const std::string& a) {
  return a == "g1" ? bethe::Axis::g1 : a == "g2" ? bethe::Axis::g2 : bethe::Axis::omega0;
}

double out_energy(double eps, const ModelParams& p, bool raw) {
  return raw ? p.omega * (eps - lambda_plus(p)) : eps;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string where(const ScanConfig& c, double v) { return c.mode + " at " + c.axis + "=" + fmt(v) + ": "; }

// Runs fn over the grid in parallel; the first failure in grid order wins.
template <class F>
std::vector<std::vector<double>> grid_rows(const ScanConfig& c, F&& fn) {
  const auto g = c.range.values();
  const int K = static_cast<int>(g.size());
  std::vector<std::vector<double>> rows(K);
  std::vector<std::string> err(K);
  parallel_for(K, c.threads, [&](int k) {
    try {
      rows[k] = fn(with_axis(c.params, c.axis, g[k]), g[k]);
    } catch (const Error& e) {
      err[k] = where(c, g[k]) + e.what();
    }
  });
  for (auto& e : err)
    if (!e.empty()) throw ComputeError(e);
  return rows;
}

std::string energy_name(const ScanConfig& c) { return c.raw_energy ? "E" : "eps"; }

Table spectrum_scan(const ScanConfig& c) {
  Table t;
  t.columns.push_back(c.axis);
  for (int i = 1; i <= c.n_keep; ++i) t.columns.push_back(energy_name(c) + std::to_string(i));
  t.rows = grid_rows(c, [&](const ModelParams& p, double v) {
    p.validate();
    const auto s = fock::block_spectrum(p, c.n_max, c.n_keep);
    std::vector<double> r{v};
    for (double e : s.epsilons) r.push_back(out_energy(e, p, c.raw_energy));
    return r;
  });
  return t;
}

Table exceptional(const ScanConfig& c) {
  Table t;
  t.columns = {c.axis, c.search_axis, "n", energy_name(c), "gap", "verified"};
  bethe::FindOptions opt;
  opt.threads = c.threads;
  const double lo = c.search_axis == "omega0" ? -c.search_max : 0.0;
  for (double v : c.range.values()) {
    const ModelParams fixed = with_axis(c.params, c.axis, v);
    std::vector<bethe::ExceptionalPoint> pts;
    try {
      pts = bethe::find_exceptional(c.n, fixed, to_axis(c.search_axis), lo, c.search_max, opt);
    } catch (const Error& e) {
      throw ComputeError(where(c, v) + e.what());
    }
    if (pts.empty()) t.warnings.push_back(where(c, v) + "no exceptional point in the search interval");
    for (const auto& pt : pts) {
      t.rows.push_back({v, pt.free_value, double(pt.n), out_energy(pt.epsilon_numeric, pt.params, c.raw_energy),
                        pt.verified_gap, pt.verified ? 1.0 : 0.0});
      if (!pt.verified) {
        t.unverified = true;
        t.warnings.push_back(where(c, v) + "point at " + c.search_axis + "=" + fmt(pt.free_value) +
                             " failed the fock check: " + pt.status);
      }
    }
  }
  return t;
}

// Inter-parity crossings at eps = N (N = 0..L) in a fock scan over g1.
std::vector<int> measured_crossings(const ModelParams& p, int L, int n_max, int threads) {
  double gmax = 0.5;
  for (const auto& l : weak::all_loci(p, L))
    if (!l.avoided) gmax = std::max(gmax, l.g1);
  const int K = 400;
  std::vector<double> grid(K);
  const double g_lo = 1e-3, g_hi = 1.15 * gmax + 0.1;
  for (int k = 0; k < K; ++k) grid[k] = g_lo + (g_hi - g_lo) * k / (K - 1);
  fock::ScanOptions so;
  so.n_max = n_max;
  so.threads = threads;
  so.detect_avoided = false;
  so.eps_max = L + 1.0;
  std::vector<int> cnt(L + 1, 0);
  for (const auto& e : fock::scan_crossings(p, grid, 3 * L + 12, so)) {
    const long N = std::lround(e.epsilon_at_event);
    if (e.kind == fock::CrossingEvent::Kind::crossing && !e.same_parity && N >= 0 && N <= L &&
        std::abs(e.epsilon_at_event - N) < 1e-4)
      ++cnt[N];
  }
  return cnt;
}

Table crossing_count(const ScanConfig& c) {
  Table t;
  t.columns = {"omega0", "n", "N_cr_predicted", "N_cr_measured"};
  const int L = c.n_max_level;
  for (double v : c.range.values()) {
    const ModelParams p = with_axis(c.params, c.axis, v);
    try {
      std::vector<int> meas;
      if (c.measure) meas = measured_crossings(p, L, c.n_max, c.threads);
      for (int N = 0; N <= L; ++N) {
        const auto ev = weak::count_events(N, p);
        t.rows.push_back({v, double(N), double(ev.crossings), c.measure ? double(meas[N]) : nan_v});
      }
    } catch (const Error& e) {
      throw ComputeError(where(c, v) + e.what());
    }
  }
  return t;
}

Table weak_compare(const ScanConfig& c) {
  Table t;
  t.columns.push_back(c.axis);
  const std::string en = energy_name(c);
  for (int i = 1; i <= c.n_keep; ++i)
    for (const char* k : {"num", "weak", "dev"}) t.columns.push_back(std::string(k) + "_" + en + std::to_string(i));
  t.columns.push_back("max_dev");
  t.rows = grid_rows(c, [&](const ModelParams& p, double v) {
    p.validate();
    const auto num = fock::block_spectrum(p, c.n_max, c.n_keep).epsilons;
    const auto wk = weak::weak_levels(p, c.n_keep);
    std::vector<double> r{v};
    double worst = 0.0;
    for (int i = 0; i < c.n_keep; ++i) {
      const double a = out_energy(num[i], p, c.raw_energy);
      const double b = c.raw_energy ? wk[i] : wk[i] / p.omega + lambda_plus(p);
      worst = std::max(worst, std::abs(a - b));
      r.insert(r.end(), {a, b, a - b});
    }
    r.push_back(worst);
    return r;
  });
  return t;
}

Table strong_compare(const ScanConfig& c) {
  Table t;
  t.columns.push_back(c.axis);
  const std::string en = energy_name(c);
  for (int i = 1; i <= c.n_keep; ++i)
    for (const char* k : {"num", "adiabatic", "squeezed"})
      t.columns.push_back(std::string(k) + "_" + en + std::to_string(i));
  const auto grid = c.range.values();
  std::vector<std::vector<std::string>> warn(grid.size());
  t.rows = grid_rows(c, [&](const ModelParams& p, double v) {
    p.validate();
    const auto num = fock::block_spectrum(p, c.n_max, c.n_keep).epsilons;
    const auto ad = strong::adiabatic_levels(p, c.n_keep);
    std::vector<double> sq;
    auto& w = warn[std::find(grid.begin(), grid.end(), v) - grid.begin()];
    for (auto& s : strong::adiabatic_warnings(p)) w.push_back("adiabatic: " + s);
    if (p.g1 > p.g2 && std::abs(p.g1 * p.g1 - p.g2 * p.g2) > tol::rabi * (p.g1 * p.g1 + p.g2 * p.g2)) {
      sq = strong::squeezed_levels(p, c.n_keep);
      for (auto& s : strong::squeezed_warnings(p)) w.push_back("squeezed: " + s);
    } else {
      w.push_back("squeezed: g1 <= g2, expansion diverges as g1 -> g2; not computed");
    }
    auto conv = [&](double E) { return c.raw_energy ? E : E / p.omega + lambda_plus(p); };
    std::vector<double> r{v};
    for (int i = 0; i < c.n_keep; ++i)
      r.insert(r.end(), {out_energy(num[i], p, c.raw_energy), conv(ad[i]), sq.empty() ? nan_v : conv(sq[i])});
    return r;
  });
  std::set<std::string> uniq;
  for (auto& w : warn) uniq.insert(w.begin(), w.end());
  t.warnings.assign(uniq.begin(), uniq.end());
  return t;
}

Table rabi_markers(const ScanConfig& c) {
  Table t;
  t.columns = {"degree", "n", "g", energy_name(c), "gap", "verified"};
  bethe::FindOptions opt;
  opt.threads = c.threads;
  for (int d = 0; d <= c.n_max_level; ++d) {
    std::vector<bethe::ExceptionalPoint> pts;
    try {
      pts = bethe::rabi_exceptional(d, c.params.omega, c.params.omega0, c.range.lo, c.range.hi, opt);
    } catch (const Error& e) {
      throw ComputeError(c.mode + " at degree " + std::to_string(d) + ": " + e.what());
    }
    for (const auto& pt : pts) {
      t.rows.push_back({double(d), double(pt.n), pt.free_value,
                        out_energy(pt.epsilon_numeric, pt.params, c.raw_energy), pt.verified_gap,
                        pt.verified ? 1.0 : 0.0});
      if (!pt.verified) {
        t.unverified = true;
        t.warnings.push_back("degree " + std::to_string(d) + " marker at g=" + fmt(pt.free_value) +
                             " failed the fock check: " + pt.status);
      }
    }
  }
  return t;
}

}  // namespace

Table run_mode(const ScanConfig& c) {
  if (c.mode == "spectrum-scan") return spectrum_scan(c);
  if (c.mode == "exceptional") return exceptional(c);
  if (c.mode == "crossing-count") return crossing_count(c);
  if (c.mode == "weak-compare") return weak_compare(c);
  if (c.mode == "strong-compare") return strong_compare(c);
  if (c.mode == "rabi-markers") return rabi_markers(c);
  throw ConfigError("mode", "unknown mode '" + c.mode + "'");
}

std::string render(const ScanConfig& c, const Table& t) {
  nlohmann::ordered_json meta;
  meta["version"] = RABI_VERSION;
  meta["columns"] = t.columns;
  meta["n_rows"] = t.rows.size();
  meta["warnings"] = t.warnings;
  meta["all_verified"] = !t.unverified;
  std::string s;
  if (c.format == "json") {
    nlohmann::ordered_json doc;
    doc["config"] = c.to_json();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json o;
      for (size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = std::isnan(r[i]) ? nlohmann::ordered_json() : nlohmann::ordered_json(r[i]);
      rows.push_back(o);
    }
    doc["rows"] = rows;
    doc["meta"] = meta;
    return doc.dump(2) + "\n";
  }
  nlohmann::ordered_json head;
  head["config"] = c.to_json();
  head["meta"] = meta;
  s = "# " + head.dump() + "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + fmt(r[i]);
    s += "\n";
  }
  return s;
}

int run(const std::vector<std::string>& args) {
  ScanConfig c;
  try {
    if (!parse_args(args, c)) return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  Table t;
  try {
    t = run_mode(c);
  } catch (const ComputeError& e) {
    std::cerr << "compute error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "compute error: " << c.mode << ": " << e.what() << "\n";
    return 3;
  }
  const std::string text = render(c, t);
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "config error in 'output': cannot write '" << c.output << "'\n";
      return 2;
    }
  }
  for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
  return t.unverified ? 4 : 0;
}

}  // namespace rabi::cli
