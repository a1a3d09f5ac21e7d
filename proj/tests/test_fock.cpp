#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rabi/fock.hpp"
#include "test_util.hpp"

using namespace rabi;

namespace {

ModelParams random_params(testutil::Rng& r) {
  return {r.uniform(0.5, 2), r.uniform(-2, 2), r.uniform(0, 1.5), r.uniform(0, 1.5)};
}

double spread(const Eigen::VectorXd& v) { return 1.0 + v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("truncated matrix is symmetric and matches the direct construction") {
  testutil::Rng rng(31);
  for (int t = 0; t < 120; ++t) {
    const ModelParams p = random_params(rng);
    const int n_max = rng.integer(2, 30);
    const auto h = fock::build(p, n_max);
    REQUIRE(h.matrix.rows() == h.dim());
    CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((h.matrix - testutil::dense_h(p, n_max)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("parity blocks reproduce the full spectrum") {
  testutil::Rng rng(32);
  for (int t = 0; t < 120; ++t) {
    const ModelParams p = random_params(rng);
    const int n_max = rng.integer(4, 40);
    const Eigen::VectorXd ref = testutil::dense_shifted(p, n_max);
    auto blocks = fock::parity_eigenvalues(p, n_max, 0);
    const auto b1 = fock::parity_eigenvalues(p, n_max, 1);
    blocks.insert(blocks.end(), b1.begin(), b1.end());
    std::sort(blocks.begin(), blocks.end());
    REQUIRE(blocks.size() == size_t(ref.size()));
    double worst = 0.0;
    for (int i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(blocks[i] - ref(i)));
    CHECK(worst <= 1e-12 * spread(ref));
  }
}

TEST_CASE("mirror transformation leaves the truncated spectrum unchanged") {
  testutil::Rng rng(33);
  for (int t = 0; t < 120; ++t) {
    const ModelParams p = random_params(rng);
    const int n_max = rng.integer(4, 40);
    const auto a = fock::shifted_eigenvalues(fock::build(p, n_max));
    const auto b = fock::shifted_eigenvalues(fock::build(mirror(p), n_max));
    double worst = 0.0, sc = 1.0;
    for (size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[i]));
      sc = std::max(sc, std::abs(a[i]));
    }
    CHECK(worst <= 1e-10 * sc);
  }
}

TEST_CASE("g2 = 0 is exactly the Jaynes-Cummings spectrum") {
  testutil::Rng rng(34);
  for (int t = 0; t < 120; ++t) {
    const ModelParams p{rng.uniform(0.5, 2), rng.uniform(-2, 2), rng.uniform(0, 1.5), 0.0};
    const int n_max = 40;
    // JC levels: -omega0 and omega (n + 1/2) +/- sqrt((omega0 - omega/2)^2 + g1^2 (n+1))
    std::vector<double> jc{-p.omega0};
    for (int n = 0; n < n_max; ++n) {
      const double Om = std::sqrt(std::pow(p.omega0 - 0.5 * p.omega, 2) + p.g1 * p.g1 * (n + 1));
      jc.push_back(p.omega * (n + 0.5) + Om);
      jc.push_back(p.omega * (n + 0.5) - Om);
    }
    std::sort(jc.begin(), jc.end());
    const auto s = fock::shifted_eigenvalues(fock::build(p, n_max));
    // the top state |n_max, +> is uncoupled in the truncation; compare the low end
    for (int i = 0; i < 30; ++i) {
      const double e = s[i] - lambda_plus(p);
      CHECK(std::abs(e * p.omega - jc[i]) <= 1e-12 * (1 + std::abs(jc[i])));
    }
  }
}

TEST_CASE("diagonalize and block_spectrum agree and certify convergence") {
  const ModelParams p{1, 1, 0.8, 0.3};
  const auto full = fock::diagonalize(fock::build(p, 120), 10);
  const auto blk = fock::block_spectrum(p, 120, 10);
  REQUIRE(full.epsilons.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(full.epsilons[i] == doctest::Approx(blk.epsilons[i]).epsilon(1e-12));
  CHECK(blk.convergence_estimate <= tol::conv);
  CHECK_THROWS_AS(fock::block_spectrum(ModelParams{1, 1, 3, 2}, 12, 6), Error);
  CHECK_THROWS_AS(fock::diagonalize(fock::build(p, 10), 100), Error);
}

TEST_CASE("parity chains are tridiagonal restrictions of H") {
  const ModelParams p{1, 0.4, 0.7, 0.2};
  const auto h = fock::build(p, 20);
  for (int par = 0; par < 2; ++par) {
    const auto c = fock::parity_chain(p, 20, par);
    for (int k = 0; k + 1 < int(c.basis.size()); ++k) {
      CHECK(c.diag(k) == h.matrix(c.basis[k], c.basis[k]));
      CHECK(std::abs(c.off(k)) == doctest::Approx(std::abs(h.matrix(c.basis[k], c.basis[k + 1]))));
    }
  }
}

TEST_CASE("coherent state amplitudes") {
  const auto c = fock::coherent_state(0.7, 40);
  CHECK(c.norm() == doctest::Approx(1.0));
  for (int k = 1; k < 10; ++k) CHECK(c(k) / c(k - 1) == doctest::Approx(0.7 / std::sqrt(double(k))));
}

TEST_CASE("eigenvector overlap of an eigenvector with itself") {
  const auto h = fock::build(ModelParams{1, 0.5, 0.6, 0.2}, 30);
  const auto s = fock::eigensystem(h);
  for (int i = 0; i < 5; ++i) CHECK(fock::eigvec_overlap(h, i, s.vectors.col(i)) == doctest::Approx(1.0));
}

TEST_CASE("scan finds the n = 0 crossing on g1^2 - g2^2 = 2 omega omega0") {
  const ModelParams tmpl{1, 1, 0, 0.5};
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(1.0 + 0.01 * k);
  fock::ScanOptions opt;
  opt.n_max = 100;
  const auto ev = fock::scan_crossings(tmpl, grid, 3, opt);
  bool hit = false;
  for (const auto& e : ev)
    if (e.kind == fock::CrossingEvent::Kind::crossing && std::abs(e.epsilon_at_event) < 1e-6) {
      CHECK(e.g1_location == doctest::Approx(1.5).epsilon(1e-9));
      CHECK(e.gap < tol::gap);
      CHECK_FALSE(e.same_parity);
      hit = true;
    }
  CHECK(hit);
}
