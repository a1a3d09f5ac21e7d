#include <algorithm>
#include <cmath>

#include "rabi/bethe.hpp"
#include "rabi/special.hpp"

namespace rabi::bethe {

std::vector<double> level_derivatives(const std::vector<cplx>& roots, double level, double nu, int lmax) {
  std::vector<double> D(lmax + 1, 0.0);
  for (int l = 0; l <= lmax; ++l) {
    cplx s = 0.0;
    for (auto z : roots) s += std::pow(cplx(level) - z, -(l + 1));
    const double pre = ((l % 2) ? -1.0 : 1.0) * special::factorial(l) / std::pow(2 * nu, l + 1);
    D[l] = pre * s.real();
  }
  return D;
}

namespace {

void check_levels(double kappa, double nu) {
  if (!(nu > 0.0)) throw Error(Errc::SingularSystem, "nu must be positive");
  if (std::abs(kappa * kappa - nu * nu) <= 1e-13 * (kappa * kappa + nu * nu))
    throw Error(Errc::SingularSystem, "kappa = +/- nu: coincident levels");
}

}  // namespace

std::vector<cplx> monic_from_power_sums(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += ((i % 2) ? 1.0 : -1.0) * e[k - i] * p[i - 1];
    e[k] = s / k;
  }
  std::vector<cplx> c(n + 1);
  for (int k = 0; k <= n; ++k) c[n - k] = ((k % 2) ? -1.0 : 1.0) * e[k];
  return c;
}

LambdaState lambda_from_roots(const std::vector<cplx>& roots, double kappa, double nu, int n) {
  if (static_cast<int>(roots.size()) != n) throw Error(Errc::InvalidParams, "need n rapidities");
  LambdaState s;
  s.levels = {nu, -nu, kappa};
  s.degeneracies = {n - 1, n, 1};
  for (int j = 0; j < 3; ++j) {
    s.derivatives[j] = level_derivatives(roots, s.levels[j], nu, std::max(s.degeneracies[j], 0));
    s.lambda[j] = s.derivatives[j][0];
  }
  return s;
}

std::array<double, 3> lambda_linear_solve(double Z1, double Z2, int n, double k, double nu) {
  if (n < 0) throw Error(Errc::InvalidParams, "n must be >= 0");
  if (n == 0) return {0.0, 0.0, 0.0};
  check_levels(k, nu);
  const double nu2 = nu * nu, n2 = double(n) * n;
  const double L2 = -(2 * Z1 * k * nu + 2 * Z1 * nu2 - 2 * Z1 - 2 * Z2 * nu + k * n2 - 2 * k * n * nu2 + n2 * nu +
                      2 * n * nu) /
                    (4 * n * nu2 * (k + nu));
  const double L3 = (2 * Z1 + 2 * Z2 * nu + k * n - 2 * n * nu2 * nu - n * nu) / (2 * nu * (k - nu) * (k + nu));
  double L1;
  if (n == 1) {
    // level nu carries no weight; its Lambda follows from the single root z = Z1
    if (std::abs(nu - Z1) < tol::pole) throw Error(Errc::SingularSystem, "root on the level nu");
    L1 = 1.0 / (2 * nu * (nu - Z1));
  } else {
    L1 = (2 * Z1 * k * nu - 2 * Z1 * nu2 - 2 * Z1 - 2 * Z2 * nu + k * n2 + 2 * k * n * nu2 - n2 * nu) /
         (4 * nu2 * (k - nu) * (n - 1));
  }
  return {L1, L2, L3};
}

double hierarchy_residual(const Hierarchy& h, int j, int l, const std::vector<double>& D,
                          const std::vector<double>& lam) {
  const double dj = h.degeneracies[j];
  const double lead = 1.0 - dj / (l + 1);
  auto Dat = [&](int i) { return i < static_cast<int>(D.size()) ? D[i] : 0.0; };
  double r = lead != 0.0 ? lead * Dat(l + 1) : 0.0;
  for (int k = 0; k <= l; ++k) r += special::binom_general(l, k) * Dat(k) * Dat(l - k);
  r -= Dat(l);
  const double tn = 2 * h.nu;
  double t = 0.0;
  for (size_t i = 0; i < h.levels.size(); ++i) {
    if (static_cast<int>(i) == j || h.degeneracies[i] == 0.0) continue;
    const double de = h.levels[i] - h.levels[j];
    double inner = (lam[i] - Dat(0)) / (std::pow(tn, l + 1) * std::pow(de, l + 1));
    for (int m = 1; m <= l; ++m)
      inner -= Dat(l - m + 1) / (std::pow(tn, m) * special::factorial(l - m + 1) * std::pow(de, m));
    t += h.degeneracies[i] * inner;
  }
  return r - special::factorial(l) * t;
}

std::vector<double> propagate_hierarchy(const Hierarchy& h, int j, const std::vector<double>& lam, int upto) {
  if (upto > h.degeneracies[j] - 1 && upto > 0)
    throw Error(Errc::SingularSystem, "hierarchy cannot be propagated past d_j - 1");
  std::vector<double> D{lam[j]};
  for (int l = 0; l < upto; ++l) {
    D.push_back(0.0);
    const double rest = hierarchy_residual(h, j, l, D, lam);
    D[l + 1] = -rest / (1.0 - h.degeneracies[j] / (l + 1));
  }
  return D;
}

double lambda_plus_from(double kappa, double nu, double delta) {
  return std::sqrt(delta * delta * nu * nu / (kappa * kappa) + std::pow(nu, 4));
}

namespace {
std::array<double, 2> condition_rhs(int n, double k, double nu, double d) {
  const double L = lambda_plus_from(k, nu, d);
  const double nu2 = nu * nu;
  const double r1 = L * L - (2 * n + 1 - k / nu) * L - (d * d + nu * (nu - k) + nu2 * nu2);
  const double r2 = -L * L + (2 * n + 1 - k / nu + k * k - nu2) * L +
                    (d * d + nu * (nu - k) + k * k * nu2 + 2 * n * nu2 * (nu2 + 1));
  return {r1, r2};
}
}  // namespace

ZPair conditions_Z(int n, double kappa, double nu, double delta) {
  if (!(nu > 0.0) || kappa == 0.0) throw Error(Errc::SingularSystem, "conditions need nu > 0, kappa != 0");
  const auto r = condition_rhs(n, kappa, nu, delta);
  return {r[0] / (2 * nu), r[1] / (2 * nu * nu)};
}

std::array<double, 2> condition_residuals(int n, double kappa, double nu, double delta, double Z1, double Z2) {
  const auto r = condition_rhs(n, kappa, nu, delta);
  return {(2 * nu * Z1 - r[0]) / (1 + std::abs(r[0])), (2 * nu * nu * Z2 - r[1]) / (1 + std::abs(r[1]))};
}

std::array<double, 2> n1_roots(double k, double nu) {
  if (!(nu > 0.0)) throw Error(Errc::SingularSystem, "nu must be positive");
  const double b = k * nu - nu * nu - 1;
  const double s = std::sqrt(nu * nu * (k + nu) * (k + nu) + 1);
  return {(b + s) / (2 * nu), (b - s) / (2 * nu)};
}

double exceptional_condition(int n, double kappa, double nu, double delta) {
  if (n < 0) throw Error(Errc::InvalidParams, "n must be >= 0");
  if (n == 0) return kappa - nu;
  if (n == 1) {
    const auto z = n1_roots(kappa, nu);
    const double r1 = condition_rhs(1, kappa, nu, delta)[0];
    return (2 * nu * z[0] - r1) * (2 * nu * z[1] - r1);
  }
  const ZPair Z = conditions_Z(n, kappa, nu, delta);
  const auto L = lambda_linear_solve(Z.Z1, Z.Z2, n, kappa, nu);
  const std::vector<double> lam(L.begin(), L.end());
  const Hierarchy h{{nu, -nu, kappa}, {double(n - 1), double(n), 1.0}, nu};
  auto D = propagate_hierarchy(h, 0, lam, n - 2);
  return hierarchy_residual(h, 0, n - 2, D, lam);
}

std::vector<cplx> rapidities_from_Z(int n, double kappa, double nu, double Z1, double Z2) {
  if (n < 0) throw Error(Errc::InvalidParams, "n must be >= 0");
  if (n == 0) return {};
  const RichardsonSystem sys = general_system(n, kappa, nu);
  std::vector<cplx> z;
  if (n == 1) {
    z = {cplx(Z1)};
  } else {
    const auto L = lambda_linear_solve(Z1, Z2, n, kappa, nu);
    const std::vector<double> lam(L.begin(), L.end());
    const Hierarchy h{{nu, -nu, kappa}, {double(n - 1), double(n), 1.0}, nu};
    const auto D = propagate_hierarchy(h, 1, lam, n - 1);
    // power sums of w = 1/(-nu - z)
    std::vector<double> p(n);
    for (int l = 0; l < n; ++l)
      p[l] = D[l] * std::pow(2 * nu, l + 1) * ((l % 2) ? -1.0 : 1.0) / special::factorial(l);
    for (auto w : special::poly_roots(monic_from_power_sums(p))) {
      if (std::abs(w) < 1e-300) throw Error(Errc::NotConverged, "rapidity at infinity");
      z.push_back(-nu - 1.0 / w);
    }
  }
  const double target = 1e-2 * tol::bethe;
  if (newton_solve(sys, z, target)) {
    cplx s1 = 0.0;
    for (auto x : z) s1 += x;
    if (std::abs(s1 - Z1) < 1e-6 * (1 + std::abs(Z1))) return z;
  }
  // fall back on the branch continuation and pick the matching branch
  for (const auto& b : branch_Z(n, kappa, nu, {.nu_start = 0, .threads = 1, .real_only = false}))
    if (std::abs(b.Z1 - Z1) < 1e-6 * (1 + std::abs(Z1)) && std::abs(b.Z2 - Z2) < 1e-6 * (1 + std::abs(Z2)))
      return b.roots;
  throw Error(Errc::NotConverged, "no Bethe solution matches (Z1, Z2)");
}

std::vector<double> delta_from_solution(int n, double k, double nu, double Z1, double Z2) {
  const double nu2 = nu * nu;
  const double den = k * k - nu2;
  if (std::abs(den) <= 1e-13 * (k * k + nu2)) return {};
  const double L = (2 * nu * Z1 + 2 * nu2 * Z2 + nu2 * nu2 - k * k * nu2 - 2 * n * nu2 * (nu2 + 1)) / den;
  const double d2 = k * k * (L * L - nu2 * nu2) / nu2;
  if (!(L > 0.0) || !(d2 > 0.0)) return {};
  return {std::sqrt(d2)};
}

}  // namespace rabi::bethe
