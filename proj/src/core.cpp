#include "rabi/core.hpp"

#include <cmath>
#include <string>

namespace rabi {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::DegenerateInversion: return "DegenerateInversion";
    case Errc::CutoffTooSmall: return "CutoffTooSmall";
    case Errc::NotConverged: return "NotConverged";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::RabiLimit: return "RabiLimit";
    case Errc::PoleCollision: return "PoleCollision";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::Degenerate: return "Degenerate";
    case Errc::NoSolutions: return "NoSolutions";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::BranchLost: return "BranchLost";
    case Errc::NotVerified: return "NotVerified";
    case Errc::InvalidIndex: return "InvalidIndex";
    case Errc::NearDegeneracy: return "NearDegeneracy";
    case Errc::NoLocus: return "NoLocus";
    case Errc::InvalidCase: return "InvalidCase";
    case Errc::UndefinedRegime: return "UndefinedRegime";
  }
  return "Unknown";
}

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw Error(Errc::InvalidParams, "omega must be > 0");
  if (!std::isfinite(omega0)) throw Error(Errc::InvalidParams, "omega0 not finite");
  if (!(g1 >= 0.0) || !std::isfinite(g1)) throw Error(Errc::InvalidParams, "g1 must be >= 0");
  if (!(g2 >= 0.0) || !std::isfinite(g2)) throw Error(Errc::InvalidParams, "g2 must be >= 0");
}

double ReducedParams::kappa_or_throw() const {
  if (!kappa) throw Error(Errc::RabiLimit, "kappa undefined on g1 == g2");
  return *kappa;
}

double lambda_plus(const ModelParams& p) {
  return (p.g1 * p.g1 + p.g2 * p.g2) / (2.0 * p.omega * p.omega);
}

ShiftedEnergy ShiftedEnergy::from_energy(double E, const ModelParams& p) {
  ShiftedEnergy s;
  s.e = E / p.omega;
  s.epsilon = s.e + lambda_plus(p);
  return s;
}

ShiftedEnergy ShiftedEnergy::from_epsilon(double epsilon, const ModelParams& p) {
  ShiftedEnergy s;
  s.epsilon = epsilon;
  s.e = epsilon - lambda_plus(p);
  return s;
}

ReducedParams reduce(const ModelParams& p) {
  p.validate();
  const double w2 = p.omega * p.omega;
  const double s1 = p.g1 * p.g1, s2 = p.g2 * p.g2;
  ReducedParams r;
  r.delta = p.omega0 / p.omega;
  r.lambda_plus = (s1 + s2) / (2.0 * w2);
  r.lambda_minus = (p.g1 - p.g2) * (p.g1 + p.g2) / (2.0 * w2);
  r.nu = std::sqrt(p.g1 * p.g2) / p.omega;
  const double sum = s1 + s2;
  if (sum > 0.0 && std::abs(s1 - s2) < tol::rabi * sum) {
    r.rabi_limit = true;
    r.lambda_minus = 0.0;
  } else if (sum == 0.0) {
    // fully decoupled: treat as JC limit with kappa = 0
    r.kappa = 0.0;
  } else {
    r.kappa = r.delta * r.nu / r.lambda_minus;
  }
  return r;
}

ModelParams invert(double kappa, double nu, double delta, double omega) {
  if (kappa == 0.0 || nu == 0.0)
    throw Error(Errc::DegenerateInversion, "kappa and nu must be nonzero");
  if (delta == 0.0)
    throw Error(Errc::DegenerateInversion, "delta == 0 maps onto the Rabi line");
  if (!(nu > 0.0) || !(omega > 0.0))
    throw Error(Errc::DegenerateInversion, "nu and omega must be positive");
  const double lm = delta * nu / kappa;
  const double nu4 = nu * nu * nu * nu;
  const double lp = std::sqrt(lm * lm + nu4);
  // lambda_plus +/- lambda_minus, computed without cancellation
  double sp = lp + lm, sm = lp - lm;
  if (lm >= 0.0)
    sm = nu4 / sp;
  else
    sp = nu4 / sm;
  ModelParams p;
  p.omega = omega;
  p.omega0 = omega * delta;
  p.g1 = omega * std::sqrt(sp);
  p.g2 = omega * std::sqrt(sm);
  return p;
}

ModelParams mirror(const ModelParams& p) {
  return ModelParams{p.omega, -p.omega0, p.g2, p.g1};
}

ModelParams canonical(const ModelParams& p) {
  return ModelParams{p.omega, p.omega0, std::abs(p.g1), std::abs(p.g2)};
}

}  // namespace rabi
