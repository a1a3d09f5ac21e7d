#include "rabi/bethe.hpp"

#include <algorithm>
#include <cmath>

namespace rabi::bethe {

OdeCoefficients ode_coefficients(const ReducedParams& r, double epsilon) {
  const double k = r.kappa_or_throw();
  const double d = r.delta, lp = r.lambda_plus, lm = r.lambda_minus, nu = r.nu;
  const double e = epsilon - lp;
  OdeCoefficients c;
  c.d0 = k * (d * d - epsilon * epsilon + 2 * epsilon * lp - lp * lp + lp + nu * nu + std::pow(nu, 4)) +
         nu * (epsilon - lp - nu * nu);
  c.d1 = e * (e + 1) - d * d + d * lp / lm + nu * k - nu * nu - 2 * nu * epsilon * k - std::pow(nu, 4);
  c.d2 = 2 * nu * epsilon;
  c.rho = {nu, -nu, k};
  c.nu_s = {1 - epsilon, -epsilon, -1};
  c.nu0 = -2 * nu;
  return c;
}

RichardsonSystem general_system(double epsilon, cplx kappa, cplx nu) {
  return {{nu, -nu, kappa}, {epsilon - 1, epsilon, 1.0}, 2.0 * nu};
}

RichardsonSystem rabi_system(double epsilon, cplx nu) {
  return {{nu, -nu}, {epsilon - 1, epsilon}, 2.0 * nu};
}

std::vector<cplx> richardson_residual(const RichardsonSystem& s, const std::vector<cplx>& z) {
  const size_t m = z.size();
  std::vector<cplx> r(m, s.coupling);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j)
      if (j != i) r[i] += 2.0 / (z[j] - z[i]);
    for (size_t q = 0; q < s.levels.size(); ++q)
      if (s.degeneracies[q] != 0.0) r[i] += s.degeneracies[q] / (z[i] - s.levels[q]);
  }
  return r;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

static Eigen::MatrixXcd jacobian(const RichardsonSystem& s, const std::vector<cplx>& z) {
  const int m = static_cast<int>(z.size());
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    cplx diag = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const cplx t = 2.0 / ((z[j] - z[i]) * (z[j] - z[i]));
      diag += t;
      J(i, j) = -t;
    }
    for (size_t q = 0; q < s.levels.size(); ++q) {
      const cplx u = z[i] - s.levels[q];
      diag -= s.degeneracies[q] / (u * u);
    }
    J(i, i) = diag;
  }
  return J;
}

bool newton_solve(const RichardsonSystem& s, std::vector<cplx>& z, double tol, int max_iter) {
  const int m = static_cast<int>(z.size());
  if (m == 0) return true;
  auto r = richardson_residual(s, z);
  double res = max_abs(r);
  for (int it = 0; it < max_iter && std::isfinite(res); ++it) {
    if (res <= 1e-3 * tol) break;
    Eigen::VectorXcd rv(m);
    for (int i = 0; i < m; ++i) rv(i) = r[i];
    const Eigen::VectorXcd dz = jacobian(s, z).partialPivLu().solve(-rv);
    if (!dz.allFinite()) return false;
    // damped step: accept the first fraction that lowers the residual
    double frac = 1.0;
    bool moved = false;
    for (int h = 0; h < 6; ++h, frac *= 0.5) {
      std::vector<cplx> zn(z);
      for (int i = 0; i < m; ++i) zn[i] += frac * dz(i);
      auto rn = richardson_residual(s, zn);
      const double resn = max_abs(rn);
      if (std::isfinite(resn) && (resn < res || h == 5)) {
        z.swap(zn);
        r.swap(rn);
        moved = resn < res;
        res = resn;
        break;
      }
    }
    if (!moved && res <= tol) break;
    if (dz.cwiseAbs().maxCoeff() < 1e-15 * (1.0 + std::abs(z[0]))) break;
  }
  return std::isfinite(res) && res <= tol;
}

std::vector<cplx> residual_bae(const std::vector<cplx>& roots, double kappa, double nu, double epsilon) {
  const RichardsonSystem s = general_system(epsilon, kappa, nu);
  for (size_t i = 0; i < roots.size(); ++i) {
    for (size_t q = 0; q < s.levels.size(); ++q)
      if (s.degeneracies[q] != 0.0 && std::abs(roots[i] - s.levels[q]) < tol::pole)
        throw Error(Errc::PoleCollision, "rapidity on a pole of the Bethe equations");
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol::pole) throw Error(Errc::PoleCollision, "coincident rapidities");
  }
  return richardson_residual(s, roots);
}

std::vector<cplx> residual_bae(const std::vector<cplx>& roots, const ReducedParams& r, double epsilon) {
  return residual_bae(roots, r.kappa_or_throw(), r.nu, epsilon);
}

BetheSolution make_solution(int n, std::vector<cplx> roots, const RichardsonSystem& s, std::string id) {
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  BetheSolution b;
  b.n = n;
  cplx z1 = 0.0, z2 = 0.0;
  for (auto z : roots) {
    z1 += z;
    z2 += z * z;
  }
  b.Z1 = z1.real();
  b.Z2 = z2.real();
  b.residual_max = max_abs(richardson_residual(s, roots));
  b.roots = std::move(roots);
  b.branch_id = std::move(id);
  return b;
}

}  // namespace rabi::bethe
