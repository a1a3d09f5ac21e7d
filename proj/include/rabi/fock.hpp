#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

#include "rabi/core.hpp"

namespace rabi::fock {

// Basis ordering: |0,->, |0,+>, |1,->, |1,+>, ...
inline int basis_index(int n, int spin) { return 2 * n + (spin > 0 ? 1 : 0); }

struct TruncatedHamiltonian {
  int n_max = 0;
  Eigen::MatrixXd matrix;
  ModelParams params;
  int dim() const { return 2 * (n_max + 1); }
};

struct SpectrumResult {
  std::vector<double> epsilons;  // ascending, shifted by lambda_plus
  int n_keep = 0;
  int n_max = 0;
  double convergence_estimate = 0.0;
};

struct Eigensystem {
  Eigen::VectorXd epsilons;  // ascending
  Eigen::MatrixXd vectors;   // columns
};

TruncatedHamiltonian build(const ModelParams& p, int n_max);

// Lowest n_keep levels, certified against a re-solve at n_max/2.
SpectrumResult diagonalize(const TruncatedHamiltonian& h, int n_keep);

std::vector<double> shifted_eigenvalues(const TruncatedHamiltonian& h);
Eigensystem eigensystem(const TruncatedHamiltonian& h);

// The excitation-number parity splits H into two tridiagonal chains over
// k = 0..n_max: parity 0 starts at |0,->, parity 1 at |0,+>, spin alternating.
struct ParityChain {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;           // off(k) couples k and k+1
  std::vector<int> basis;        // full-basis index of chain site k
};
ParityChain parity_chain(const ModelParams& p, int n_max, int parity);

// Shifted eigenvalues of one parity block, ascending.
std::vector<double> parity_eigenvalues(const ModelParams& p, int n_max, int parity);

// Lowest n_keep shifted levels from both parity blocks, certified like
// diagonalize() against a re-solve at n_max/2. Same result, O(n_max^2).
SpectrumResult block_spectrum(const ModelParams& p, int n_max, int n_keep);

// |<ref|v_level>|, or the norm of the projection onto the eigenspace when
// `level` belongs to a degenerate pair (separation below gap_tol * omega).
double eigvec_overlap(const TruncatedHamiltonian& h, int level, const Eigen::VectorXd& reference,
                      double degeneracy_tol = tol::gap);

// Coherent state amplitudes e^{-a^2/2} a^n / sqrt(n!) by recursion,
// renormalized after truncation.
Eigen::VectorXd coherent_state(double alpha, int n_max);

struct CrossingEvent {
  enum class Kind { crossing, avoided };
  Kind kind = Kind::crossing;
  double g1_location = 0.0;
  double epsilon_at_event = 0.0;
  double gap = 0.0;
  std::pair<int, int> level_pair{0, 1};  // indices in the full ascending spectrum
  bool same_parity = false;
  // true when a same-parity gap fell below gap_tol: reported as a crossing,
  // but it is a (numerically unresolved) avoided crossing.
  bool caveat = false;
};

struct ScanOptions {
  int n_max = 120;
  double g1_refine_tol = 1e-11;
  double gap_tol = tol::gap;  // in units of omega
  int threads = 0;            // 0 = hardware concurrency
  bool detect_avoided = true;
  bool detect_crossings = true;
  // skip level pairs lying entirely above this shifted energy at both ends of
  // a grid interval
  double eps_max = std::numeric_limits<double>::infinity();
};

// Scans g1 over the grid (other parameters from p_template) and reports
// inter-parity crossings and same-parity gap minima among the lowest n_levels
// of each parity block. Sorted by g1_location.
std::vector<CrossingEvent> scan_crossings(const ModelParams& p_template, const std::vector<double>& g1_grid,
                                          int n_levels, const ScanOptions& opt = {});

}  // namespace rabi::fock
