#include <algorithm>
#include <cmath>
#include <limits>

#include "rabi/bethe.hpp"
#include "rabi/fock.hpp"
#include "rabi/parallel.hpp"
#include "rabi/special.hpp"

namespace rabi::bethe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sign changes of f on a uniform grid, refined by bisection. Brackets where
// |f| grows while narrowing are poles and are dropped.
std::vector<double> grid_roots(const std::function<double(double)>& f, double lo, double hi, int G, int threads) {
  if (!(hi > lo) || G < 2) throw Error(Errc::InvalidParams, "need lo < hi and at least two grid points");
  std::vector<double> t(G), v(G);
  for (int k = 0; k < G; ++k) t[k] = lo + (hi - lo) * k / (G - 1);
  parallel_for(G, threads, [&](int k) { v[k] = f(t[k]); });

  std::vector<int> brackets;
  for (int k = 0; k + 1 < G; ++k) {
    if (!std::isfinite(v[k]) || !std::isfinite(v[k + 1])) continue;
    if (v[k] == 0.0 || (v[k] < 0.0) != (v[k + 1] < 0.0)) brackets.push_back(k);
  }
  std::vector<double> roots(brackets.size(), kNaN);
  parallel_for(static_cast<int>(brackets.size()), threads, [&](int q) {
    const int k = brackets[q];
    double a = t[k], b = t[k + 1], fa = v[k], fb = v[k + 1];
    if (fa == 0.0) {
      roots[q] = a;
      return;
    }
    while (b - a > tol::param * std::max(1.0, std::abs(a))) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (!std::isfinite(fm)) return;
      if (fm == 0.0) {
        a = b = m;
        fa = fb = 0.0;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
    }
    if (std::min(std::abs(fa), std::abs(fb)) >= std::min(std::abs(v[k]), std::abs(v[k + 1])) &&
        std::min(std::abs(fa), std::abs(fb)) > 0.0)
      return;  // pole
    roots[q] = 0.5 * (a + b);
  });
  std::erase_if(roots, [](double x) { return std::isnan(x); });
  return roots;
}

double general_F(int n, const ModelParams& p) {
  if (!(p.g1 > 0.0) || !(p.g2 > 0.0) || p.omega0 == 0.0) return kNaN;
  const ReducedParams r = reduce(p);
  if (r.rabi_limit || !r.kappa) return kNaN;
  try {
    return exceptional_condition(n, *r.kappa, r.nu, r.delta);
  } catch (const Error&) {
    return kNaN;
  }
}

void verify_fock(ExceptionalPoint& pt, const FindOptions& opt) {
  if (!opt.verify) {
    pt.status = "not verified";
    return;
  }
  const auto fd = fock_degeneracy(pt.params, pt.n, opt.n_max);
  pt.verified_gap = fd[0];
  pt.epsilon_numeric = fd[1];
  const bool gap_ok = fd[0] < opt.gap_tol;
  const bool eps_ok = std::abs(fd[1] - pt.n) < tol::integer;
  pt.verified = gap_ok && eps_ok && pt.solution.residual_max < tol::bethe &&
                std::abs(pt.cond_residual[0]) < tol::cond && std::abs(pt.cond_residual[1]) < tol::cond;
  if (pt.verified)
    pt.status = "verified";
  else if (!gap_ok)
    pt.status = "fock gap above tolerance";
  else if (!eps_ok)
    pt.status = "fock energy not at integer";
  else
    pt.status = "Bethe residual above tolerance";
}

}  // namespace

int auto_cutoff(const ModelParams& p, int n) {
  const double g = (p.g1 + p.g2) / p.omega;
  const double est = 80.0 + 4.0 * n + 40.0 * g * g + 2.0 * std::abs(p.omega0 / p.omega);
  return static_cast<int>(std::clamp(est, 120.0, 1200.0));
}

std::array<double, 2> fock_degeneracy(const ModelParams& p, int n, int n_max) {
  const int N = n_max > 0 ? n_max : auto_cutoff(p, n);
  double best[2];
  for (int par = 0; par < 2; ++par) {
    const auto ev = fock::parity_eigenvalues(p, N, par);
    best[par] = *std::min_element(ev.begin(), ev.end(),
                                  [&](double a, double b) { return std::abs(a - n) < std::abs(b - n); });
  }
  return {std::abs(best[0] - best[1]), 0.5 * (best[0] + best[1])};
}

std::vector<ExceptionalPoint> find_exceptional_path(int n, const std::function<ModelParams(double)>& path,
                                                    double lo, double hi, const FindOptions& opt) {
  if (n < 0) throw Error(Errc::InvalidParams, "n must be >= 0");
  auto F = [&](double t) {
    try {
      return general_F(n, path(t));
    } catch (const Error&) {
      return kNaN;
    }
  };
  const auto roots = grid_roots(F, lo, hi, opt.grid_points, opt.threads);

  std::vector<std::optional<ExceptionalPoint>> pts(roots.size());
  parallel_for(static_cast<int>(roots.size()), opt.threads, [&](int q) {
    ExceptionalPoint pt;
    pt.n = n;
    pt.degree = n;
    pt.free_value = roots[q];
    pt.params = path(roots[q]);
    pt.reduced = reduce(pt.params);
    const double k = *pt.reduced.kappa, nu = pt.reduced.nu, d = pt.reduced.delta;
    const RichardsonSystem sys = general_system(n, k, nu);
    std::vector<cplx> z;
    try {
      if (n == 1) {
        // the product form also vanishes when only the Z1 condition holds for
        // the other root; keep the root that satisfies it
        const auto zz = n1_roots(k, nu);
        const ZPair Z = conditions_Z(1, k, nu, d);
        z = {cplx(std::abs(zz[0] - Z.Z1) < std::abs(zz[1] - Z.Z1) ? zz[0] : zz[1])};
      } else if (n >= 2) {
        const ZPair Z = conditions_Z(n, k, nu, d);
        z = rapidities_from_Z(n, k, nu, Z.Z1, Z.Z2);
      }
      if (n >= 1) newton_solve(sys, z, 1e-2 * tol::bethe);
    } catch (const Error&) {
      return;  // no Bethe solution behind this root
    }
    pt.solution = make_solution(n, z, sys, "exceptional");
    pt.cond_residual = condition_residuals(n, k, nu, d, pt.solution.Z1, pt.solution.Z2);
    // spurious zeros (n = 1 product form, poles that slipped through) fail
    // the conditions algebraically and are not exceptional points
    if (std::abs(pt.cond_residual[0]) > 1e3 * tol::cond || std::abs(pt.cond_residual[1]) > 1e3 * tol::cond) return;
    verify_fock(pt, opt);
    pts[q] = std::move(pt);
  });
  std::vector<ExceptionalPoint> out;
  for (auto& p : pts)
    if (p) out.push_back(std::move(*p));
  return out;
}

std::vector<ExceptionalPoint> find_exceptional(int n, const ModelParams& fixed, Axis free_axis, double lo,
                                               double hi, const FindOptions& opt) {
  auto path = [fixed, free_axis](double t) {
    ModelParams p = fixed;
    switch (free_axis) {
      case Axis::g1: p.g1 = t; break;
      case Axis::g2: p.g2 = t; break;
      case Axis::omega0: p.omega0 = t; break;
    }
    return p;
  };
  return find_exceptional_path(n, path, lo, hi, opt);
}

std::vector<ExceptionalPoint> find_exceptional_delta(int n, double kappa, double nu, double lo, double hi,
                                                     double omega, const FindOptions& opt) {
  auto path = [=](double d) { return invert(kappa, nu, d, omega); };
  return find_exceptional_path(n, path, lo, hi, opt);
}

// ---------------------------------------------------------------------------
// Rabi line

namespace {
std::array<double, 2> rabi_lambdas(int n, double nu, double delta, double* Z1out) {
  const double Z1 = (-2 * nu * nu * (n + 2) - delta * delta + 1) / (2 * nu);
  if (Z1out) *Z1out = Z1;
  const double L1 = (2 * nu * Z1 + n * (n + 2 + 2 * nu * nu)) / (4 * nu * nu * n);
  const double L2 = -(2 * nu * Z1 + n * (n + 2 - 2 * nu * nu)) / (4 * nu * nu * (n + 1));
  return {L1, L2};
}
}  // namespace

double rabi_condition(int n, double nu, double delta) {
  if (n < 0) throw Error(Errc::InvalidParams, "degree must be >= 0");
  if (n == 0) return 1 - delta * delta - 4 * nu * nu;
  if (!(nu > 0.0)) throw Error(Errc::SingularSystem, "nu must be positive");
  const auto L = rabi_lambdas(n, nu, delta, nullptr);
  const std::vector<double> lam(L.begin(), L.end());
  const Hierarchy h{{nu, -nu}, {double(n), double(n + 1)}, nu};
  const auto D = propagate_hierarchy(h, 0, lam, n - 1);
  return hierarchy_residual(h, 0, n - 1, D, lam);
}

std::vector<ExceptionalPoint> rabi_exceptional(int degree, double omega, double omega0, double g_lo, double g_hi,
                                               const FindOptions& opt) {
  if (degree < 0) throw Error(Errc::InvalidParams, "degree must be >= 0");
  ModelParams base{omega, omega0, 0.0, 0.0};
  base.validate();
  const double delta = omega0 / omega;
  auto F = [&](double g) { return g > 0.0 ? rabi_condition(degree, g / omega, delta) : kNaN; };
  const auto roots = grid_roots(F, std::max(g_lo, 0.0), g_hi, opt.grid_points, opt.threads);

  std::vector<std::optional<ExceptionalPoint>> pts(roots.size());
  parallel_for(static_cast<int>(roots.size()), opt.threads, [&](int q) {
    const double g = roots[q];
    if (!(g > 0.0)) return;
    ExceptionalPoint pt;
    pt.n = degree + 1;
    pt.degree = degree;
    pt.free_value = g;
    pt.params = {omega, omega0, g, g};
    pt.reduced = reduce(pt.params);
    const double nu = g / omega;
    const RichardsonSystem sys = rabi_system(degree + 1, nu);
    std::vector<cplx> z;
    double Z1c = 0.0;
    if (degree >= 1) {
      const auto L = rabi_lambdas(degree, nu, delta, &Z1c);
      const std::vector<double> lam(L.begin(), L.end());
      const Hierarchy h{{nu, -nu}, {double(degree), double(degree + 1)}, nu};
      const auto D = propagate_hierarchy(h, 0, lam, degree - 1);
      std::vector<double> p(degree);
      for (int l = 0; l < degree; ++l)  // power sums of w = 1/(nu - z)
        p[l] = D[l] * std::pow(2 * nu, l + 1) * ((l % 2) ? -1.0 : 1.0) / std::tgamma(l + 1.0);
      for (auto w : special::poly_roots(monic_from_power_sums(p))) z.push_back(nu - 1.0 / w);
      newton_solve(sys, z, 1e-2 * tol::bethe);
    }
    pt.solution = make_solution(degree, z, sys, "rabi");
    const double rhs = -2 * nu * nu * (degree + 2) - delta * delta + 1;
    pt.cond_residual = {(2 * nu * pt.solution.Z1 - rhs) / (1 + std::abs(rhs)), 0.0};
    if (std::abs(pt.cond_residual[0]) > 1e3 * tol::cond) return;
    verify_fock(pt, opt);
    pts[q] = std::move(pt);
  });
  std::vector<ExceptionalPoint> out;
  for (auto& p : pts)
    if (p) out.push_back(std::move(*p));
  return out;
}

// ---------------------------------------------------------------------------
// Eigenstates

namespace {

using Poly = std::vector<double>;  // coefficients low -> high

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_add(Poly a, const Poly& b, double sb = 1.0) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += sb * b[i];
  return a;
}

Poly poly_der(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = i * a[i];
  return d;
}

// Divides by (c0 + c1 z); returns quotient, writes |remainder|.
Poly poly_div_linear(const Poly& a, double c0, double c1, double* rem) {
  if (c1 == 0.0) {
    Poly q(a);
    for (auto& x : q) x /= c0;
    *rem = 0.0;
    return q;
  }
  const int m = static_cast<int>(a.size()) - 1;
  if (m < 1) {
    *rem = std::abs(a.empty() ? 0.0 : a[0]);
    return {0.0};
  }
  Poly q(m, 0.0);
  double carry = a[m];
  for (int i = m - 1; i >= 0; --i) {
    q[i] = carry / c1;
    carry = a[i] - q[i] * c0;
  }
  *rem = std::abs(carry);
  return q;
}

Poly reflect(const Poly& a) {
  Poly b(a);
  for (size_t i = 1; i < b.size(); i += 2) b[i] = -b[i];
  return b;
}

// poly(a^+) applied to the unnormalized coherent vector with amplitude s
Eigen::VectorXd bargmann_to_fock(const Poly& poly, double s, int n_max) {
  Eigen::VectorXd f(n_max + 1), out = Eigen::VectorXd::Zero(n_max + 1);
  f(0) = 1.0;
  for (int k = 1; k <= n_max; ++k) f(k) = f(k - 1) * s / std::sqrt(double(k));
  for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) {
    Eigen::VectorXd sh = Eigen::VectorXd::Zero(n_max + 1);
    for (int k = 1; k <= n_max; ++k) sh(k) = out(k - 1) * std::sqrt(double(k));
    out = sh + poly[i] * f;
  }
  return out;
}

Eigen::VectorXd spinor(const Poly& p1, const Poly& p2, double s, double ratio, int n_max) {
  // sigma_z = + component sqrt(g1/g2)(psi2 - psi1), sigma_z = - component psi1 + psi2
  const Eigen::VectorXd up = bargmann_to_fock(poly_add(p2, p1, -1.0), s, n_max) * ratio;
  const Eigen::VectorXd dn = bargmann_to_fock(poly_add(p1, p2), s, n_max);
  Eigen::VectorXd v(2 * (n_max + 1));
  for (int k = 0; k <= n_max; ++k) {
    v(fock::basis_index(k, -1)) = dn(k);
    v(fock::basis_index(k, +1)) = up(k);
  }
  return v / v.norm();
}

}  // namespace

Doublet eigenstate_at_exceptional(const ExceptionalPoint& pt, int n_max) {
  const ModelParams& p = pt.params;
  if (!(p.g1 > 0.0) || !(p.g2 > 0.0)) throw Error(Errc::InvalidParams, "both couplings must be positive");
  if (n_max < 1) throw Error(Errc::CutoffTooSmall, "n_max must be >= 1");
  const ReducedParams r = reduce(p);
  const double nu = r.nu, lp = r.lambda_plus, lm = r.lambda_minus, d = r.delta;
  const double e = pt.n - lp;

  // chi(z) = prod (z - z_i); conjugate pairs make it real
  std::vector<cplx> c{1.0};
  for (auto z : pt.solution.roots) {
    std::vector<cplx> nc(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= z * c[i];
    }
    c.swap(nc);
  }
  Poly chi(c.size());
  for (size_t i = 0; i < c.size(); ++i) chi[i] = c[i].real();

  // psi2 = -[(z - nu)(chi' - nu chi) - ((lp/nu) z + e) chi] / ((lm/nu) z - delta)
  const Poly num = poly_add(poly_mul({-nu, 1.0}, poly_add(poly_der(chi), chi, -nu)), poly_mul({e, lp / nu}, chi), -1.0);
  Doublet out;
  const double c1 = std::abs(lm / nu) < 1e-14 ? 0.0 : lm / nu;
  Poly q = poly_div_linear(num, -d, c1, &out.division_remainder);
  for (auto& x : q) x = -x;

  const double ratio = std::sqrt(p.g1 / p.g2);
  out.psi = spinor(chi, q, -nu, ratio, n_max);
  out.partner = spinor(reflect(q), reflect(chi), nu, ratio, n_max);
  Eigen::VectorXd a = out.psi + out.partner, b = out.psi - out.partner;
  out.even = a.norm() > 1e-8 ? Eigen::VectorXd(a / a.norm()) : out.psi;
  out.odd = b.norm() > 1e-8 ? Eigen::VectorXd(b / b.norm()) : out.partner;
  return out;
}

}  // namespace rabi::bethe
