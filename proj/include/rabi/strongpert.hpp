#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "rabi/core.hpp"

namespace rabi::strong {

// ---------------------------------------------------------------------------
// Small omega0: two displaced ladders |N_+/-> = D(-/+ beta/omega)|N>

struct AdiabaticParams {
  double beta = 0;          // (g1+g2)/2
  double lambda_asym = 0;   // (g1-g2)/2
  double displacement = 0;  // beta/omega
  double laguerre_arg = 0;  // 4 beta^2/omega^2
};

AdiabaticParams adiabatic_params(const ModelParams& p);

// <M_-|N_+> for displacement alpha = beta/omega.
double displaced_overlap(int M, int N, double beta_over_omega);

// <M_-|a|N_+> and <M_-|a^+|N_+> via the ladder relations.
double displaced_a(int M, int N, double beta_over_omega);
double displaced_adag(int M, int N, double beta_over_omega);

// {E_N^+, E_N^-} in energy units (not shifted).
std::array<double, 2> adiabatic_energies(int N, const ModelParams& p);

// The N-th 2x2 block before diagonalization (Hermitian, purely imaginary
// off-diagonal). Exposed for tests.
Eigen::Matrix2cd adiabatic_block(int N, const ModelParams& p);

// Lowest `count` adiabatic levels, ascending.
std::vector<double> adiabatic_levels(const ModelParams& p, int count);

// Regime hints (never errors): beta/omega >~ 1, omega0 << omega, |lambda| << 1.
std::vector<std::string> adiabatic_warnings(const ModelParams& p);

// ---------------------------------------------------------------------------
// Large omega0: squeezed operators A = (g1 a + g2 a^+)/g_-

struct SqueezedParams {
  double g_minus = 0;  // sqrt(g1^2 - g2^2)
  double omega_g = 0;  // omega (g1^2+g2^2)/(g1^2-g2^2)
  double r = 0;        // tanh r = g2/g1
  double shift = 0;    // omega g2^2/g_-^2
  double perturbation_strength = 0;  // omega g1 g2/g_-^2
};

SqueezedParams squeezed_params(const ModelParams& p);  // UndefinedRegime if g1 <= g2

// JC-like spectrum of the squeezed leading term: n >= 0, sign = +1/-1.
// n = 0: sign = -1 is the single state |0,-> (-omega0 + shift); sign = +1
// is the partner |A-number -1, +>, not a state, returned for completeness
// and skipped by squeezed_levels.
double squeezed_spectrum(int n, int sign, const ModelParams& p);

// Lowest `count` physical levels, ascending.
std::vector<double> squeezed_levels(const ModelParams& p, int count);

std::vector<std::string> squeezed_warnings(const ModelParams& p);

}  // namespace rabi::strong
