#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rabi/core.hpp"

namespace rabi::bethe {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Second-order ODE for chi(z) = exp(nu z) psi_1(z)

struct OdeCoefficients {
  double d0 = 0, d1 = 0, d2 = 0;
  std::array<double, 3> rho{};   // nu, -nu, kappa
  std::array<double, 3> nu_s{};  // 1-eps, -eps, -1
  double nu0 = 0;                // -2 nu
};

OdeCoefficients ode_coefficients(const ReducedParams& r, double epsilon);

// ---------------------------------------------------------------------------
// Richardson form: r_i = sum_{j!=i} 2/(z_j-z_i) + sum_s d_s/(z_i-e_s) + c = 0.
// Levels and coupling may be complex (used for continuation in nu).

struct RichardsonSystem {
  std::vector<cplx> levels;
  std::vector<double> degeneracies;
  cplx coupling = 0.0;
};

// levels (nu, -nu, kappa), degeneracies (eps-1, eps, 1), coupling 2 nu
RichardsonSystem general_system(double epsilon, cplx kappa, cplx nu);
// g1 == g2: levels (nu, -nu), degeneracies (eps-1, eps), coupling 2 nu
RichardsonSystem rabi_system(double epsilon, cplx nu);

std::vector<cplx> richardson_residual(const RichardsonSystem& s, const std::vector<cplx>& z);
double max_abs(const std::vector<cplx>& v);

// Newton on the Richardson equations with analytic Jacobian. Returns true on
// max residual <= tol.
bool newton_solve(const RichardsonSystem& s, std::vector<cplx>& z, double tol, int max_iter = 50);

// Residuals of the Bethe equations; PoleCollision if a root sits within
// pole_tol of nu, -nu or kappa, or two roots coincide.
std::vector<cplx> residual_bae(const std::vector<cplx>& roots, double kappa, double nu, double epsilon);
std::vector<cplx> residual_bae(const std::vector<cplx>& roots, const ReducedParams& r, double epsilon);

struct BetheSolution {
  int n = 0;
  std::vector<cplx> roots;
  double Z1 = 0, Z2 = 0;
  double residual_max = 0;
  std::string branch_id;
};

BetheSolution make_solution(int n, std::vector<cplx> roots, const RichardsonSystem& s, std::string id = {});

// ---------------------------------------------------------------------------
// Lambda variables Lambda_j = (1/2nu) sum_k 1/(e_j - z_k) and the closed system.
// Derivatives use the convention Lambda_j^(l) = (2nu)^{-l} d^l Lambda_j / de_j^l,
// i.e. (-1)^l l! / (2nu)^{l+1} sum_k (e_j - z_k)^{-(l+1)}.

struct LambdaState {
  std::array<double, 3> lambda{};
  // derivatives[j][l] = Lambda_j^(l), l = 0..d_j (l = 0 is Lambda_j itself)
  std::array<std::vector<double>, 3> derivatives;
  std::array<double, 3> levels{};
  std::array<int, 3> degeneracies{};
};

// Lambda^(l) of a single level, l = 0..lmax (real part for complex roots).
std::vector<double> level_derivatives(const std::vector<cplx>& roots, double level, double nu, int lmax);

// Monic polynomial (coefficients low -> high) from power sums p_1..p_n.
std::vector<cplx> monic_from_power_sums(const std::vector<double>& p);

LambdaState lambda_from_roots(const std::vector<cplx>& roots, double kappa, double nu, int n);

// Closed-form solution of the linear sum rules for given (Z1, Z2).
// n == 0 gives zeros; n == 1 evaluates Lambda_1 from the single root Z1.
std::array<double, 3> lambda_linear_solve(double Z1, double Z2, int n, double kappa, double nu);

struct Hierarchy {
  std::vector<double> levels;
  std::vector<double> degeneracies;
  double nu = 0;
};

// Residual of the l-th derivative equation for level j (l = 0 is the
// quadratic equation). D holds Lambda_j^(0..l+1); lam holds all Lambda_i.
double hierarchy_residual(const Hierarchy& h, int j, int l, const std::vector<double>& D,
                          const std::vector<double>& lam);

// Solves the hierarchy of level j upward from Lambda_j for Lambda_j^(1..upto).
// Requires upto <= d_j - 1 so every leading coefficient is nonzero.
std::vector<double> propagate_hierarchy(const Hierarchy& h, int j, const std::vector<double>& lam, int upto);

// ---------------------------------------------------------------------------
// Conditions on (Z1, Z2) at eps = n

struct ZPair {
  double Z1 = 0, Z2 = 0;
};

double lambda_plus_from(double kappa, double nu, double delta);
ZPair conditions_Z(int n, double kappa, double nu, double delta);
// lhs - rhs of the Z1 and Z2 conditions, each divided by (1 + |rhs|)
std::array<double, 2> condition_residuals(int n, double kappa, double nu, double delta, double Z1, double Z2);

// Closed-form single root at n = 1: {z_+, z_-}.
std::array<double, 2> n1_roots(double kappa, double nu);

// Scalar whose real zeros (in any one free parameter) are exceptional points.
// n = 0: kappa - nu. n = 1: product over z_+/- of the Z1-condition residual.
// n >= 2: last equation of the Lambda_1 hierarchy after Z1, Z2 are replaced
// by the conditions.
double exceptional_condition(int n, double kappa, double nu, double delta);

// Rapidities for given (Z1, Z2) at eps = n from the Lambda_2 hierarchy
// (power sums + Newton identities), polished on the Bethe equations.
std::vector<cplx> rapidities_from_Z(int n, double kappa, double nu, double Z1, double Z2);

// Exceptional delta values implied by a Bethe solution at fixed (kappa, nu):
// summing the two conditions is linear in lambda_plus. Returns |delta| (empty
// when lambda_plus <= nu^2 or kappa^2 == nu^2).
std::vector<double> delta_from_solution(int n, double kappa, double nu, double Z1, double Z2);

// ---------------------------------------------------------------------------
// Branches and asymptotics

struct BranchOptions {
  double nu_start = 0;   // 0 = automatic
  int threads = 0;
  bool real_only = true;
};

// All solutions at eps = n for fixed (kappa, nu), continued from the
// large-nu cluster configurations labelled by occupations (a1, a2, a3).
std::vector<BetheSolution> branch_Z(int n, double kappa, double nu, const BranchOptions& opt = {});

// Ground-branch nu -> 0 limit from Laguerre root sums.
ZPair asymptotic_Z(int n, double kappa, double nu);

// nu -> 0 start configuration of the ground branch (roots of L_n^(-1-2n)).
std::vector<cplx> asymptotic_roots(int n, double kappa, double nu);

// ---------------------------------------------------------------------------
// Exceptional points

struct ExceptionalPoint {
  int n = 0;        // integer shifted energy
  int degree = 0;   // polynomial degree (n, or n-1 on the Rabi line)
  ModelParams params;
  ReducedParams reduced;
  BetheSolution solution;
  double free_value = 0;
  double verified_gap = -1;      // fock gap at the point
  double epsilon_numeric = 0;    // fock energy of the degenerate pair
  std::array<double, 2> cond_residual{};
  bool verified = false;
  std::string status;
};

struct FindOptions {
  int grid_points = 1500;
  int n_max = 0;       // 0 = automatic cutoff for verification
  bool verify = true;
  double gap_tol = tol::gap;
  int threads = 0;
};

enum class Axis { g1, g2, omega0 };

// General search along a one-parameter path t -> ModelParams.
std::vector<ExceptionalPoint> find_exceptional_path(int n, const std::function<ModelParams(double)>& path,
                                                    double lo, double hi, const FindOptions& opt = {});

// Fix three of (omega, omega0, g1, g2) via `fixed`, vary `free_axis` over [lo, hi].
std::vector<ExceptionalPoint> find_exceptional(int n, const ModelParams& fixed, Axis free_axis, double lo,
                                               double hi, const FindOptions& opt = {});

// Fixed (kappa, nu), delta varied over [lo, hi]; params via invert.
std::vector<ExceptionalPoint> find_exceptional_delta(int n, double kappa, double nu, double lo, double hi,
                                                     double omega = 1.0, const FindOptions& opt = {});

// Rabi line g1 = g2 = g: polynomial degree `degree`, energy eps = degree + 1.
double rabi_condition(int degree, double nu, double delta);
std::vector<ExceptionalPoint> rabi_exceptional(int degree, double omega, double omega0, double g_lo, double g_hi,
                                               const FindOptions& opt = {});

// Fock-space check at a parameter point: gap between the levels of opposite
// parity closest to eps = n. Returns {gap, mean eps}.
std::array<double, 2> fock_degeneracy(const ModelParams& p, int n, int n_max = 0);
int auto_cutoff(const ModelParams& p, int n);

// ---------------------------------------------------------------------------
// Eigenstates at an exceptional point

struct Doublet {
  Eigen::VectorXd even, odd;   // (psi +/- psi~) normalized
  Eigen::VectorXd psi, partner;
  double division_remainder = 0;
};

Doublet eigenstate_at_exceptional(const ExceptionalPoint& pt, int n_max);

}  // namespace rabi::bethe
