#pragma once

#include <optional>

#include "rabi/errors.hpp"

namespace rabi {

// Numerical thresholds shared across modules. Energies are in units of omega.
namespace tol {
constexpr double rabi = 1e-12;      // relative |g1^2-g2^2|/(g1^2+g2^2) below which g1 == g2
constexpr double conv = 1e-9;       // per-level drift between n_max and n_max/2
constexpr double gap = 1e-7;        // crossing vs avoided crossing
constexpr double integer = 1e-6;    // epsilon distance to an integer
constexpr double half = 1e-6;       // epsilon distance to a half-integer
constexpr double param = 1e-10;     // bisection width on the free parameter
constexpr double bethe = 1e-10;     // Bethe equation residual
constexpr double cond = 1e-8;       // Z1/Z2 condition residual
constexpr double pole = 1e-8;       // rapidity/pole separation
constexpr double sing = 1e-3;       // second-order denominator guard
constexpr int default_n_max = 200;
}  // namespace tol

// H = w a^+a + w0 sz + g1 (a^+ s- + a s+) + g2 (a^+ s+ + a s-)
// The two-level splitting is 2*omega0.
struct ModelParams {
  double omega = 1.0;
  double omega0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  void validate() const;  // throws Error(InvalidParams)
  bool operator==(const ModelParams&) const = default;
};

struct ReducedParams {
  double delta = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double nu = 0.0;
  std::optional<double> kappa;  // empty on the Rabi line
  bool rabi_limit = false;

  double kappa_or_throw() const;
};

struct ShiftedEnergy {
  double epsilon = 0.0;  // E/omega + lambda_plus
  double e = 0.0;        // E/omega

  static ShiftedEnergy from_energy(double E, const ModelParams& p);
  static ShiftedEnergy from_epsilon(double epsilon, const ModelParams& p);
};

double lambda_plus(const ModelParams& p);

ReducedParams reduce(const ModelParams& p);

// Inverse of reduce on (delta, nu, kappa). Picks g1 > g2 for kappa*delta > 0
// and g1 < g2 otherwise (sign of lambda_minus = delta*nu/kappa).
ModelParams invert(double kappa, double nu, double delta, double omega = 1.0);

// (w, w0, g1, g2) -> (w, -w0, g2, g1); unitarily equivalent spectrum.
ModelParams mirror(const ModelParams& p);

// Couplings are canonicalized to g >= 0 (sign flips are unitary).
ModelParams canonical(const ModelParams& p);

}  // namespace rabi
