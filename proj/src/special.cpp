#include "rabi/special.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rabi::special {

using cplx = std::complex<double>;

double laguerre(int k, double alpha, double x) {
  if (k < 0) return 0.0;
  double lm2 = 1.0;
  if (k == 0) return lm2;
  double lm1 = 1.0 + alpha - x;
  for (int j = 2; j <= k; ++j) {
    const double l = ((2.0 * j - 1.0 + alpha - x) * lm1 - (j - 1.0 + alpha) * lm2) / j;
    lm2 = lm1;
    lm1 = l;
  }
  return lm1;
}

double factorial(int n) {
  return std::tgamma(n + 1.0);
}

double binom_general(double t, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= (t - i) / (i + 1.0);
  return r;
}

std::vector<double> laguerre_coefficients(int n, double alpha) {
  std::vector<double> c(n + 1);
  double fact = 1.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) fact *= i;
    c[i] = ((i % 2) ? -1.0 : 1.0) * binom_general(n + alpha, n - i) / fact;
  }
  return c;
}

double laguerre_root_sum(int n, double alpha) {
  return n * (n + alpha);
}

double laguerre_root_square_sum(int n, double alpha) {
  return n * (n + alpha) * (2.0 * n + alpha - 1.0);
}

static cplx horner(const std::vector<cplx>& c, cplx x, cplx* deriv) {
  cplx p = 0.0, dp = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
  if (deriv) *deriv = dp;
  return p;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& c_in) {
  std::vector<cplx> c = c_in;
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (auto& x : r) {
    for (int it = 0; it < 4; ++it) {
      cplx d;
      const cplx p = horner(c, x, &d);
      if (std::abs(d) == 0.0) break;
      const cplx step = p / d;
      if (!std::isfinite(std::abs(step))) break;
      const cplx xn = x - step;
      if (std::abs(horner(c, xn, nullptr)) >= std::abs(p)) break;
      x = xn;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
  }
  return r;
}

std::vector<cplx> poly_roots(const std::vector<double>& c) {
  return poly_roots(std::vector<cplx>(c.begin(), c.end()));
}

std::vector<cplx> laguerre_roots(int n, double alpha) {
  if (n <= 0) return {};
  return poly_roots(laguerre_coefficients(n, alpha));
}

}  // namespace rabi::special
