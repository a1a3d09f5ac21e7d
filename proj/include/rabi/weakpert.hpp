#pragma once

#include <array>
#include <string>
#include <vector>

#include "rabi/core.hpp"

// Small g2: the counter-rotating term as a perturbation of the JC model.
// For small g1 use core's mirror() and call the same functions.
namespace rabi::weak {

struct JCLevel {
  int n = 0;  // n = -1 only with k = 1 (the state |0,->)
  int k = 0;
  double E0 = 0;
  double Omega_n = 0;
  double alpha_n = 0;
};

JCLevel jc_level(int n, int k, const ModelParams& p);

// Second-order shift from the g2 term (already multiplied by g2^2).
// NearDegeneracy within tol::sing * omega of a vanishing denominator.
double second_order(int n, int k, const ModelParams& p);

enum class Case {
  zero,            // E_{-1,1} = E_{1,1}
  a1,              // E_{n,0} = E_{n+2,1}
  b1,              // E_{n,1} = E_{n+2,1}
  a2,              // E_{n,1} = E_{n-2,0}
  b2,              // E_{n,1} = E_{n-2,1}
  avoided_p,       // E_{n,k} = E_{n+2p,1}
  crossing_p,      // E_{n,k} = E_{n+2p-1,1}
  minus1_avoided,  // E_{-1,1} = E_{-1+2p,1}
  minus1_crossing  // E_{-1,1} = E_{-2+2p,1}
};

std::string case_name(Case c);
Case parse_case(const std::string& s);  // InvalidCase

struct DegeneracyLocus {
  Case case_label = Case::zero;
  int p = 1;
  int n = 0;
  int k = 0;
  std::array<int, 2> lower{0, 0};   // (n, k) of the first level
  std::array<int, 2> upper{0, 1};   // (m, 1) of the second level
  double g1_sq_over_2w = 0;         // g1^2/(2 omega), energy units
  double g1 = 0;
  double E_at = 0;                  // degenerate unperturbed energy
  double epsilon_at = 0;            // E_at/omega + g1^2/(2 omega^2)
  bool avoided = false;             // same parity -> avoided crossing
};

// n, p, k as in the Case comments (ignored where fixed). Only omega and
// omega0 of `p_model` are used. NoLocus when the validity condition fails.
DegeneracyLocus degeneracy_loci(Case c, int n, int p, int k, const ModelParams& p_model);

// All loci whose degenerate shifted energy lies in [0, eps_max].
std::vector<DegeneracyLocus> all_loci(const ModelParams& p_model, double eps_max);

// First-order gap for cases 0, 1a, 1b, 2a, 2b evaluated at p.g1.
// Higher-p gaps are O(g2^p) and have no closed form: InvalidCase.
double gap(Case c, int n, const ModelParams& p);

// Two-level energies {E+, E-} for (n=-1,k=1) case 0, (n>=0,k=0) case 1a,
// (n>=0,k=1) case 1b.
std::array<double, 2> avoided_energies(int n, int k, const ModelParams& p);

// Lowest `count` approximate energies: the two-level formula for case-0/1a/1b
// pairs closer than `window` gaps, E0 + E2 for the remaining levels (E0 alone
// where the second-order denominator guard fires). Ascending, energy units.
std::vector<double> weak_levels(const ModelParams& p, int count, double window = 10.0);

struct EventCount {
  int crossings = 0;  // at shifted energy N
  int avoided = 0;    // at shifted energy N + 1/2
};

EventCount count_events(int N, const ModelParams& p);

}  // namespace rabi::weak
