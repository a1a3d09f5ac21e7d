#include "rabi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabi/parallel.hpp"

namespace rabi::fock {

TruncatedHamiltonian build(const ModelParams& p, int n_max) {
  p.validate();
  if (n_max < 1) throw Error(Errc::CutoffTooSmall, "n_max must be >= 1");
  TruncatedHamiltonian h;
  h.n_max = n_max;
  h.params = p;
  const int dim = 2 * (n_max + 1);
  h.matrix = Eigen::MatrixXd::Zero(dim, dim);
  auto& M = h.matrix;
  for (int n = 0; n <= n_max; ++n) {
    const int dn = basis_index(n, -1), up = basis_index(n, +1);
    M(dn, dn) = p.omega * n - p.omega0;
    M(up, up) = p.omega * n + p.omega0;
    if (n >= 1) {
      const double v = p.g1 * std::sqrt(double(n));  // <n,-|H|n-1,+>
      const int j = basis_index(n - 1, +1);
      M(dn, j) = v;
      M(j, dn) = v;
    }
    if (n + 1 <= n_max) {
      const double v = p.g2 * std::sqrt(double(n + 1));  // <n,-|H|n+1,+>
      const int j = basis_index(n + 1, +1);
      M(dn, j) = v;
      M(j, dn) = v;
    }
  }
  return h;
}

std::vector<double> shifted_eigenvalues(const TruncatedHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::NotConverged, "dense eigensolver failed");
  const double lp = lambda_plus(h.params);
  std::vector<double> out(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) out[i] = es.eigenvalues()[i] / h.params.omega + lp;
  return out;
}

Eigensystem eigensystem(const TruncatedHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
  if (es.info() != Eigen::Success) throw Error(Errc::NotConverged, "dense eigensolver failed");
  Eigensystem s;
  s.epsilons = es.eigenvalues().array() / h.params.omega + lambda_plus(h.params);
  s.vectors = es.eigenvectors();
  return s;
}

SpectrumResult diagonalize(const TruncatedHamiltonian& h, int n_keep) {
  if (n_keep < 1 || n_keep > h.dim())
    throw Error(Errc::IndexOutOfRange, "n_keep outside [1, dim]");
  const int half = h.n_max / 2;
  if (half < 1 || n_keep > 2 * (half + 1))
    throw Error(Errc::CutoffTooSmall, "n_max too small to certify " + std::to_string(n_keep) + " levels");
  const auto full = shifted_eigenvalues(h);
  const auto coarse = shifted_eigenvalues(build(h.params, half));
  SpectrumResult r;
  r.n_max = h.n_max;
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < n_keep; ++i) {
    const double drift = std::abs(full[i] - coarse[i]);
    if (drift > tol::conv) break;
    worst = std::max(worst, drift);
    ++ok;
  }
  if (ok < n_keep)
    throw Error(Errc::NotConverged, "only " + std::to_string(ok) + " of " + std::to_string(n_keep) +
                                        " levels converged at n_max=" + std::to_string(h.n_max));
  r.n_keep = ok;
  r.epsilons.assign(full.begin(), full.begin() + ok);
  r.convergence_estimate = worst;
  return r;
}

ParityChain parity_chain(const ModelParams& p, int n_max, int parity) {
  p.validate();
  if (n_max < 1) throw Error(Errc::CutoffTooSmall, "n_max must be >= 1");
  ParityChain c;
  c.diag.resize(n_max + 1);
  c.off.resize(n_max);
  c.basis.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    const bool start_down = (parity % 2 == 0);
    const int s = ((k % 2 == 0) == start_down) ? -1 : +1;
    c.diag(k) = p.omega * k + s * p.omega0;
    c.basis[k] = basis_index(k, s);
    if (k < n_max) c.off(k) = (s < 0 ? p.g2 : p.g1) * std::sqrt(double(k + 1));
  }
  return c;
}

std::vector<double> parity_eigenvalues(const ModelParams& p, int n_max, int parity) {
  const ParityChain c = parity_chain(p, n_max, parity);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(c.diag, c.off, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::NotConverged, "tridiagonal eigensolver failed");
  const double lp = lambda_plus(p);
  std::vector<double> out(c.diag.size());
  for (int i = 0; i < c.diag.size(); ++i) out[i] = es.eigenvalues()[i] / p.omega + lp;
  return out;
}

SpectrumResult block_spectrum(const ModelParams& p, int n_max, int n_keep) {
  if (n_keep < 1 || n_keep > 2 * (n_max + 1)) throw Error(Errc::IndexOutOfRange, "n_keep outside [1, dim]");
  const int half = n_max / 2;
  if (half < 1 || n_keep > 2 * (half + 1))
    throw Error(Errc::CutoffTooSmall, "n_max too small to certify " + std::to_string(n_keep) + " levels");
  auto merged = [&](int N) {
    auto a = parity_eigenvalues(p, N, 0);
    const auto b = parity_eigenvalues(p, N, 1);
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };
  const auto full = merged(n_max), coarse = merged(half);
  SpectrumResult r;
  r.n_max = n_max;
  double worst = 0.0;
  for (int i = 0; i < n_keep; ++i) {
    const double drift = std::abs(full[i] - coarse[i]);
    if (drift > tol::conv)
      throw Error(Errc::NotConverged, "only " + std::to_string(i) + " of " + std::to_string(n_keep) +
                                          " levels converged at n_max=" + std::to_string(n_max));
    worst = std::max(worst, drift);
  }
  r.n_keep = n_keep;
  r.epsilons.assign(full.begin(), full.begin() + n_keep);
  r.convergence_estimate = worst;
  return r;
}

double eigvec_overlap(const TruncatedHamiltonian& h, int level, const Eigen::VectorXd& reference,
                      double degeneracy_tol) {
  if (level < 0 || level >= h.dim()) throw Error(Errc::IndexOutOfRange, "level index");
  if (reference.size() != h.dim()) throw Error(Errc::IndexOutOfRange, "reference dimension mismatch");
  const Eigensystem s = eigensystem(h);
  double acc = 0.0;
  for (int j = 0; j < h.dim(); ++j) {
    if (j != level && std::abs(s.epsilons(j) - s.epsilons(level)) >= degeneracy_tol) continue;
    const double c = s.vectors.col(j).dot(reference);
    acc += c * c;
  }
  return std::sqrt(acc);
}

Eigen::VectorXd coherent_state(double alpha, int n_max) {
  Eigen::VectorXd c(n_max + 1);
  c(0) = 1.0;
  for (int k = 1; k <= n_max; ++k) c(k) = c(k - 1) * alpha / std::sqrt(double(k));
  return c / c.norm();
}

namespace {

struct Levels {
  std::vector<double> par[2];
};

Levels levels_at(const ModelParams& tmpl, double g1, int n_max) {
  ModelParams p = tmpl;
  p.g1 = g1;
  Levels L;
  L.par[0] = parity_eigenvalues(p, n_max, 0);
  L.par[1] = parity_eigenvalues(p, n_max, 1);
  return L;
}

// (i, i+1) where i counts the levels strictly below the lower member
std::pair<int, int> global_pair(const Levels& L, double lower) {
  const double cut = lower - 1e-12 * std::max(1.0, std::abs(lower));
  int below = 0;
  for (int b = 0; b < 2; ++b)
    for (double e : L.par[b])
      if (e < cut) ++below;
  return {below, below + 1};
}

}  // namespace

std::vector<CrossingEvent> scan_crossings(const ModelParams& tmpl, const std::vector<double>& grid,
                                          int n_levels, const ScanOptions& opt) {
  const int K = static_cast<int>(grid.size());
  if (K < 2) return {};
  for (int k = 1; k < K; ++k)
    if (!(grid[k] > grid[k - 1])) throw Error(Errc::InvalidParams, "g1 grid must be strictly ascending");
  const int nl = std::min(n_levels, opt.n_max + 1);

  std::vector<Levels> lv(K);
  parallel_for(K, opt.threads, [&](int k) { lv[k] = levels_at(tmpl, grid[k], opt.n_max); });

  struct Job {
    int kind;  // 0 = inter-parity crossing, 1 = same-parity gap minimum
    int k, i, j, block;
  };
  std::vector<Job> jobs;
  if (opt.detect_crossings) {
    for (int k = 0; k + 1 < K; ++k)
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          const double a = lv[k].par[0][i] - lv[k].par[1][j];
          const double b = lv[k + 1].par[0][i] - lv[k + 1].par[1][j];
          const double top = std::min({lv[k].par[0][i], lv[k].par[1][j], lv[k + 1].par[0][i], lv[k + 1].par[1][j]});
          if ((a < 0.0) != (b < 0.0) && top <= opt.eps_max) jobs.push_back({0, k, i, j, 0});
        }
  }
  if (opt.detect_avoided) {
    for (int blk = 0; blk < 2; ++blk)
      for (int i = 0; i + 1 < nl; ++i)
        for (int k = 1; k + 1 < K; ++k) {
          auto g = [&](int q) { return lv[q].par[blk][i + 1] - lv[q].par[blk][i]; };
          if (g(k) < g(k - 1) && g(k) <= g(k + 1) && lv[k].par[blk][i] <= opt.eps_max) jobs.push_back({1, k, i, i + 1, blk});
        }
  }

  std::vector<CrossingEvent> ev(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), opt.threads, [&](int q) {
    const Job& jb = jobs[q];
    CrossingEvent e;
    if (jb.kind == 0) {
      double lo = grid[jb.k], hi = grid[jb.k + 1];
      auto diff = [&](double g) {
        const Levels L = levels_at(tmpl, g, opt.n_max);
        return L.par[0][jb.i] - L.par[1][jb.j];
      };
      // Illinois false position: bracket kept, superlinear on smooth crossings
      double flo = diff(lo), fhi = diff(hi);
      int side = 0;
      for (int it = 0; it < 200 && hi - lo > opt.g1_refine_tol * std::max(1.0, std::abs(lo)); ++it) {
        double m = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(m > lo && m < hi)) m = 0.5 * (lo + hi);
        const double fm = diff(m);
        if (fm == 0.0) {
          lo = hi = m;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = m;
          flo = fm;
          if (side == -1) fhi *= 0.5;
          side = -1;
        } else {
          hi = m;
          fhi = fm;
          if (side == 1) flo *= 0.5;
          side = 1;
        }
        if (std::abs(fm) < 1e-14) {  // at rounding level already
          lo = hi = m;
          break;
        }
      }
      const double g = 0.5 * (lo + hi);
      const Levels L = levels_at(tmpl, g, opt.n_max);
      const double a = L.par[0][jb.i], b = L.par[1][jb.j];
      e.g1_location = g;
      e.epsilon_at_event = 0.5 * (a + b);
      e.gap = std::abs(a - b);
      e.same_parity = false;
      e.kind = e.gap < opt.gap_tol ? CrossingEvent::Kind::crossing : CrossingEvent::Kind::avoided;
      e.level_pair = global_pair(L, std::min(a, b));
    } else {
      // golden-section on the same-parity gap
      auto gapf = [&](double g, double* mid_eps) {
        const Levels L = levels_at(tmpl, g, opt.n_max);
        const auto& v = L.par[jb.block];
        if (mid_eps) *mid_eps = 0.5 * (v[jb.i] + v[jb.j]);
        return v[jb.j] - v[jb.i];
      };
      const double r = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = grid[jb.k - 1], b = grid[jb.k + 1];
      double c = b - r * (b - a), d = a + r * (b - a);
      double fc = gapf(c, nullptr), fd = gapf(d, nullptr);
      while (b - a > opt.g1_refine_tol * std::max(1.0, std::abs(a))) {
        if (fc < fd) {
          b = d; d = c; fd = fc;
          c = b - r * (b - a);
          fc = gapf(c, nullptr);
        } else {
          a = c; c = d; fc = fd;
          d = a + r * (b - a);
          fd = gapf(d, nullptr);
        }
      }
      const double g = 0.5 * (a + b);
      double eps = 0.0;
      e.gap = gapf(g, &eps);
      e.g1_location = g;
      e.epsilon_at_event = eps;
      e.same_parity = true;
      if (e.gap < opt.gap_tol) {
        e.kind = CrossingEvent::Kind::crossing;
        e.caveat = true;
      } else {
        e.kind = CrossingEvent::Kind::avoided;
      }
      e.level_pair = global_pair(levels_at(tmpl, g, opt.n_max), eps - 0.5 * e.gap);
    }
    ev[q] = e;
  });

  std::stable_sort(ev.begin(), ev.end(), [](const CrossingEvent& x, const CrossingEvent& y) {
    if (x.g1_location != y.g1_location) return x.g1_location < y.g1_location;
    return x.epsilon_at_event < y.epsilon_at_event;
  });
  return ev;
}

}  // namespace rabi::fock
