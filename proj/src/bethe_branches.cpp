#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "rabi/bethe.hpp"
#include "rabi/parallel.hpp"
#include "rabi/special.hpp"

namespace rabi::bethe {

namespace {

struct Occupation {
  int a1, a2, a3;  // rapidities attached to nu, -nu, kappa at large nu
};

std::vector<Occupation> occupations(int n) {
  std::vector<Occupation> out;
  for (int a3 = 0; a3 <= 1; ++a3)
    for (int a1 = 0; a1 <= n - 1; ++a1) {
      const int a2 = n - a3 - a1;
      if (a2 >= 0 && a2 <= n) out.push_back({a1, a2, a3});
    }
  return out;
}

// Cluster start: roots of L_a^(-d-1) scaled by 1/(2 nu) around each level.
std::vector<cplx> cluster_start(int n, double kappa, double nu0, const Occupation& o) {
  const double lv[3] = {nu0, -nu0, kappa};
  const int occ[3] = {o.a1, o.a2, o.a3};
  const int d[3] = {n - 1, n, 1};
  std::vector<cplx> z;
  for (int j = 0; j < 3; ++j)
    for (auto u : special::laguerre_roots(occ[j], -d[j] - 1.0)) z.push_back(lv[j] + u / (2 * nu0));
  return z;
}

double scale_of(const std::vector<cplx>& z) {
  double m = 0.0;
  for (auto x : z) m = std::max(m, std::abs(x));
  return m;
}

// Continues z from nu0 to nu_t along a complex detour (avoids the real-axis
// collisions where branches meet). Returns nullopt when the path is lost.
std::optional<std::vector<cplx>> track(std::vector<cplx> z, int n, double kappa, double nu0, double nu_t,
                                       double eta) {
  const double l0 = std::log(nu0), l1 = std::log(nu_t);
  auto nu_at = [&](double t) {
    return std::exp(l0 + t * (l1 - l0)) * cplx(1.0, eta * std::sin(std::numbers::pi * t));
  };
  double t = 0.0, dt = 1e-2;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + dt);
    const cplx nu = nu_at(tn);
    // no extrapolated predictor: it lets close branches swap
    std::vector<cplx> guess = z;
    const double tol = 1e-12 * std::max(1.0, std::abs(nu));
    const bool ok = newton_solve(general_system(n, kappa, nu), guess, tol, 8);
    double jump = 0.0;
    for (size_t i = 0; i < z.size(); ++i) jump = std::max(jump, std::abs(guess[i] - z[i]));
    if (ok && jump < 0.2 * (1.0 + scale_of(z))) {
      z.swap(guess);
      t = tn;
      dt = std::min(dt * 1.5, 0.05);
    } else {
      dt *= 0.5;
      if (dt < 1e-9) return std::nullopt;
    }
  }
  return z;
}

bool same_roots(const BetheSolution& a, const BetheSolution& b) {
  if (a.roots.size() != b.roots.size()) return false;
  // greedy multiset matching; sort order alone is fragile for conjugate pairs
  std::vector<bool> used(b.roots.size(), false);
  for (auto z : a.roots) {
    bool hit = false;
    for (size_t j = 0; j < b.roots.size() && !hit; ++j)
      if (!used[j] && std::abs(z - b.roots[j]) <= 1e-6 * (1.0 + std::abs(z))) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

std::vector<BetheSolution> branch_Z(int n, double kappa, double nu, const BranchOptions& opt) {
  if (n < 0) throw Error(Errc::InvalidParams, "n must be >= 0");
  if (!(nu > 0.0) || !std::isfinite(kappa)) throw Error(Errc::InvalidParams, "need nu > 0 and finite kappa");
  if (std::abs(kappa * kappa - nu * nu) <= 1e-12 * (kappa * kappa + nu * nu))
    throw Error(Errc::SingularSystem, "kappa = +/- nu: coincident levels");
  const RichardsonSystem target = general_system(n, kappa, nu);
  if (n == 0) return {make_solution(0, {}, target, "occ(0,0,0)")};

  const double nu0 = opt.nu_start > 0 ? opt.nu_start : std::max({10.0, 3.0 * std::abs(kappa), 2.0 * n});
  const auto occ = occupations(n);
  std::vector<std::optional<BetheSolution>> found(occ.size());
  const double etas[] = {0.3, -0.3, 0.6, -0.6};

  auto attempt = [&](size_t q, double eta) -> std::optional<BetheSolution> {
    std::vector<cplx> z = cluster_start(n, kappa, nu0, occ[q]);
    if (!newton_solve(general_system(n, kappa, nu0), z, 1e-12 * nu0)) return std::nullopt;
    auto zt = track(z, n, kappa, nu0, nu, eta);
    if (!zt) return std::nullopt;
    if (!newton_solve(target, *zt, 1e-2 * tol::bethe)) return std::nullopt;
    const auto& o = occ[q];
    return make_solution(n, *zt, target,
                         "occ(" + std::to_string(o.a1) + "," + std::to_string(o.a2) + "," + std::to_string(o.a3) + ")");
  };

  parallel_for(static_cast<int>(occ.size()), opt.threads, [&](int q) {
    for (double eta : etas)
      if ((found[q] = attempt(q, eta))) break;
  });

  // distinct start clusters must end on distinct solutions; retry duplicates
  std::vector<BetheSolution> out;
  for (size_t q = 0; q < occ.size(); ++q) {
    if (!found[q]) continue;
    bool dup = std::any_of(out.begin(), out.end(), [&](const BetheSolution& b) { return same_roots(b, *found[q]); });
    for (size_t e = 1; dup && e < std::size(etas); ++e) {
      auto alt = attempt(q, etas[e]);
      if (alt && std::none_of(out.begin(), out.end(), [&](const BetheSolution& b) { return same_roots(b, *alt); })) {
        found[q] = alt;
        dup = false;
      }
    }
    if (dup) continue;
    out.push_back(*found[q]);
  }

  if (opt.real_only) {
    std::erase_if(out, [](const BetheSolution& b) {
      cplx z1 = 0.0, z2 = 0.0;
      for (auto z : b.roots) {
        z1 += z;
        z2 += z * z;
      }
      return std::abs(z1.imag()) > 1e-8 * (1 + std::abs(z1.real())) ||
             std::abs(z2.imag()) > 1e-8 * (1 + std::abs(z2.real()));
    });
  }
  std::sort(out.begin(), out.end(), [](const BetheSolution& a, const BetheSolution& b) { return a.Z1 < b.Z1; });
  return out;
}

ZPair asymptotic_Z(int n, double kappa, double nu) {
  if (n < 1) return {0.0, 0.0};
  if (!(nu > 0.0)) throw Error(Errc::InvalidParams, "nu must be positive");
  // z_k ~ y_k/(2 nu) + (kappa - nu)/(2n), y_k the roots of L_n^(-1-2n)
  const double alpha = -1.0 - 2.0 * n;
  const double s1 = special::laguerre_root_sum(n, alpha);
  const double s2 = special::laguerre_root_square_sum(n, alpha);
  const double c = (kappa - nu) / (2.0 * n);
  return {s1 / (2 * nu) + n * c, s2 / (4 * nu * nu) + 2 * c * s1 / (2 * nu) + n * c * c};
}

std::vector<cplx> asymptotic_roots(int n, double kappa, double nu) {
  std::vector<cplx> z;
  const double c = n > 0 ? (kappa - nu) / (2.0 * n) : 0.0;
  for (auto y : special::laguerre_roots(n, -1.0 - 2.0 * n)) z.push_back(y / (2 * nu) + c);
  return z;
}

}  // namespace rabi::bethe
