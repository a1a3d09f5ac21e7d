#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rabi/bethe.hpp"
#include "rabi/fock.hpp"
#include "test_util.hpp"

using namespace rabi;
using bethe::cplx;

namespace {

// Bethe equations written out directly:
// sum_{j!=i} 2/(z_j - z_i) + (n-1)/(z_i - nu) + n/(z_i + nu) + 1/(z_i - kappa) + 2 nu
double bae_direct(const std::vector<cplx>& z, int n, double kappa, double nu) {
  double worst = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    cplx r = (n - 1.0) / (z[i] - nu) + double(n) / (z[i] + nu) + 1.0 / (z[i] - kappa) + 2 * nu;
    for (size_t j = 0; j < z.size(); ++j)
      if (j != i) r += 2.0 / (z[j] - z[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double lambda_direct(const std::vector<cplx>& z, double e, double nu) {
  cplx s = 0.0;
  for (auto x : z) s += 1.0 / (e - x);
  return (s / (2 * nu)).real();
}

}  // namespace

TEST_CASE("Richardson system layout") {
  const auto s = bethe::general_system(3.0, 0.4, 0.7);
  REQUIRE(s.levels.size() == 3);
  CHECK(s.levels[0] == cplx(0.7));
  CHECK(s.levels[1] == cplx(-0.7));
  CHECK(s.levels[2] == cplx(0.4));
  CHECK(s.degeneracies[0] == 2.0);
  CHECK(s.degeneracies[1] == 3.0);
  CHECK(s.degeneracies[2] == 1.0);
  CHECK(s.coupling == cplx(1.4));
}

TEST_CASE("n = 1 closed-form roots satisfy the Bethe equation") {
  testutil::Rng rng(41);
  for (int t = 0; t < 150; ++t) {
    const double kappa = rng.uniform(0.1, 1), nu = rng.uniform(0.1, 1);
    if (std::abs(kappa - nu) < 1e-3) continue;
    for (double z : bethe::n1_roots(kappa, nu)) {
      CHECK(bae_direct({cplx(z)}, 1, kappa, nu) < 1e-12 * (1 + 1 / nu));
      CHECK(bethe::max_abs(bethe::residual_bae({cplx(z)}, kappa, nu, 1.0)) < 1e-11);
    }
  }
}

TEST_CASE("branch solutions: Bethe residuals, Lambda consistency and hierarchy") {
  testutil::Rng rng(42);
  int instances = 0;
  while (instances < 120) {
    const int n = rng.integer(2, 4);
    const double kappa = rng.uniform(-1.5, 1.5), nu = rng.uniform(0.3, 1.2);
    if (std::abs(std::abs(kappa) - nu) < 0.05) continue;
    bethe::BranchOptions opt;
    opt.real_only = false;
    const auto sols = bethe::branch_Z(n, kappa, nu, opt);
    for (const auto& s : sols) {
      ++instances;
      REQUIRE(s.roots.size() == size_t(n));
      CHECK(bae_direct(s.roots, n, kappa, nu) < 1e-9);
      const auto st = bethe::lambda_from_roots(s.roots, kappa, nu, n);
      const double lv[3] = {nu, -nu, kappa};
      for (int j = 0; j < 3; ++j) CHECK(std::abs(st.lambda[j] - lambda_direct(s.roots, lv[j], nu)) < 1e-10);
      // real (Z1, Z2) only for the linear solve: conjugate-pair branches are real, others skipped
      cplx z1 = 0.0, z2 = 0.0;
      for (auto z : s.roots) {
        z1 += z;
        z2 += z * z;
      }
      if (std::abs(z1.imag()) < 1e-9 && std::abs(z2.imag()) < 1e-9) {
        const auto lin = bethe::lambda_linear_solve(z1.real(), z2.real(), n, kappa, nu);
        for (int j = 0; j < 3; ++j)
          CHECK(std::abs(lin[j] - st.lambda[j]) <= 1e-10 * (1 + std::abs(st.lambda[j])));
        const bethe::Hierarchy h{{nu, -nu, kappa}, {double(n - 1), double(n), 1.0}, nu};
        const std::vector<double> lam(st.lambda.begin(), st.lambda.end());
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < st.degeneracies[j]; ++l) {
            const auto& D = st.derivatives[j];
            double sc = 1.0;
            for (double d : D) sc = std::max(sc, std::abs(d));
            CHECK(std::abs(bethe::hierarchy_residual(h, j, l, D, lam)) <= 1e-9 * sc * sc);
          }
      }
    }
  }
}

TEST_CASE("branch_Z finds all 2n solutions for moderate parameters") {
  bethe::BranchOptions opt;
  opt.real_only = false;
  for (int n = 1; n <= 4; ++n) {
    const auto s = bethe::branch_Z(n, 0.3, 0.8, opt);
    CHECK(s.size() == size_t(2 * n));
  }
  CHECK_THROWS_AS(bethe::branch_Z(2, 0.5, 0.5), Error);
}

TEST_CASE("residual_bae reports pole collisions") {
  CHECK_THROWS_AS(bethe::residual_bae({cplx(-0.5)}, 0.2, 0.5, 1.0), Error);
  // at eps = 1 the level nu has zero weight: no pole there
  CHECK_NOTHROW(bethe::residual_bae({cplx(0.5)}, 0.2, 0.5, 1.0));
  CHECK_THROWS_AS(bethe::residual_bae({cplx(0.1), cplx(0.1)}, 0.2, 0.5, 2.0), Error);
}

TEST_CASE("delta from Bethe solutions zeroes the exceptional condition") {
  testutil::Rng rng(43);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 100; ++t) {
    const int n = rng.integer(2, 3);
    const double kappa = rng.uniform(0.1, 1.5), nu = rng.uniform(0.2, 1.0);
    if (std::abs(kappa - nu) < 0.05) continue;
    for (const auto& s : bethe::branch_Z(n, kappa, nu)) {
      for (double d : bethe::delta_from_solution(n, kappa, nu, s.Z1, s.Z2)) {
        const auto cr = bethe::condition_residuals(n, kappa, nu, d, s.Z1, s.Z2);
        // summed conditions hold by construction; each one separately only at a genuine point
        if (std::max(std::abs(cr[0]), std::abs(cr[1])) > 1e-8) continue;
        ++checked;
        const double f = bethe::exceptional_condition(n, kappa, nu, d);
        const double f1 = bethe::exceptional_condition(n, kappa, nu, d * (1 + 1e-3));
        CHECK(std::abs(f) <= 1e-5 * std::max(1.0, std::abs(f1)));
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("n = 0 exceptional points lie on g1^2 - g2^2 = 2 omega omega0") {
  testutil::Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    const double g2 = rng.uniform(0.05, 1.0), w0 = rng.uniform(0.2, 1.5);
    const ModelParams fixed{1.0, w0, 0.0, g2};
    bethe::FindOptions opt;
    opt.grid_points = 200;
    opt.verify = t % 10 == 0;
    const auto pts = bethe::find_exceptional(0, fixed, bethe::Axis::g1, 0.0, 4.0, opt);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].params.g1 == doctest::Approx(std::sqrt(2 * w0 + g2 * g2)).epsilon(1e-9));
    if (opt.verify) CHECK(pts[0].verified);
  }
}

TEST_CASE("exceptional points are degenerate in the truncated spectrum") {
  const ModelParams fixed{1.0, 1.0, 0.0, 0.5};
  const size_t expect[] = {1, 2, 4, 5};
  for (int n = 0; n <= 3; ++n) {
    const auto pts = bethe::find_exceptional(n, fixed, bethe::Axis::g1, 0.01, 4.0);
    CHECK(pts.size() == expect[n]);
    for (const auto& p : pts) {
      CHECK(p.verified);
      CHECK(p.verified_gap < tol::gap);
      CHECK(std::abs(p.epsilon_numeric - n) < tol::integer);
      // an independent look with the dense diagonalization
      const auto s = fock::shifted_eigenvalues(fock::build(p.params, 160));
      double best = 1e9;
      for (size_t i = 0; i + 1 < s.size(); ++i)
        if (std::abs(s[i] - n) < 1e-3) best = std::min(best, s[i + 1] - s[i]);
      CHECK(best < 1e-7);
    }
  }
}

TEST_CASE("exceptional search on delta at fixed kappa, nu") {
  testutil::Rng rng(45);
  int found = 0;
  for (int t = 0; t < 50; ++t) {
    const double kappa = rng.uniform(0.1, 1), nu = rng.uniform(0.1, 1);
    if (std::abs(kappa - nu) < 1e-2) continue;
    for (const auto& p : bethe::find_exceptional_delta(1, kappa, nu, -6, 6)) {
      ++found;
      CHECK(p.verified);
      CHECK(*p.reduced.kappa == doctest::Approx(kappa).epsilon(1e-9));
    }
  }
  CHECK(found >= 50);
}

TEST_CASE("nu -> 0 asymptotics of the ground branch") {
  const int n = 3;
  const double kappa = 0.5;
  double prev = 0.0;
  for (double nu : {0.04, 0.02, 0.01}) {
    const auto a = bethe::asymptotic_Z(n, kappa, nu);
    const auto sols = bethe::branch_Z(n, kappa, nu);
    double best = 1e300;
    for (const auto& s : sols) best = std::min(best, std::abs(s.Z1 - a.Z1) / std::abs(a.Z1));
    CHECK(best < 1e-2);
    if (prev > 0) CHECK(best < prev);
    prev = best;
  }
}

TEST_CASE("Rabi line markers are verified crossings") {
  const double expect[] = {0.7905694150420949, 0.653959, 0.572143};
  for (int d = 1; d <= 3; ++d) {
    const auto pts = bethe::rabi_exceptional(d, 1.0, 1.0, 0.0, 1.0);
    REQUIRE(!pts.empty());
    CHECK(pts[0].free_value == doctest::Approx(expect[d - 1]).epsilon(1e-6));
    for (const auto& p : pts) {
      CHECK(p.verified);
      CHECK(p.n == d + 1);
    }
  }
  CHECK(std::abs(bethe::rabi_condition(1, reduce({1, 1, 0.7905694150420949, 0.7905694150420949}).nu, 1.0)) < 1e-9);
}

TEST_CASE("eigenstates at exceptional points live in the degenerate eigenspace") {
  const ModelParams fixed{1.0, 1.0, 0.0, 0.5};
  for (int n = 0; n <= 2; ++n) {
    for (const auto& p : bethe::find_exceptional(n, fixed, bethe::Axis::g1, 0.01, 4.0)) {
      const int n_max = 150;
      const auto d = bethe::eigenstate_at_exceptional(p, n_max);
      const auto h = fock::build(p.params, n_max);
      const auto es = fock::eigensystem(h);
      int lvl = 0;
      for (int i = 0; i < es.epsilons.size(); ++i)
        if (std::abs(es.epsilons(i) - n) < std::abs(es.epsilons(lvl) - n)) lvl = i;
      CHECK(fock::eigvec_overlap(h, lvl, d.psi, 1e-6) > 1 - 1e-10);
      CHECK(fock::eigvec_overlap(h, lvl, d.partner, 1e-6) > 1 - 1e-10);
    }
  }
}
