#include <cmath>
#include <complex>

#include "doctest.h"
#include "rabi/special.hpp"
#include "test_util.hpp"

using namespace rabi::special;

namespace {

// L_k^a(x) = sum_i (-1)^i C(k+a, k-i) x^i / i!, binomials built as products
double direct_laguerre(int k, double a, double x) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    double b = 1.0;
    for (int m = 1; m <= k - i; ++m) b *= (a + i + m) / m;
    double xi = 1.0;
    for (int m = 1; m <= i; ++m) xi *= x / m;
    s += (i % 2 ? -1.0 : 1.0) * b * xi;
  }
  return s;
}

std::complex<double> horner(const std::vector<double>& c, std::complex<double> x) {
  std::complex<double> v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

}  // namespace

TEST_CASE("Laguerre recurrence matches direct summation") {
  testutil::Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const int k = rng.integer(0, 12);
    const double a = t % 3 == 0 ? rng.integer(-15, 5) : rng.uniform(-8, 6);
    const double x = rng.uniform(0, 6);
    const double ref = direct_laguerre(k, a, x);
    double scale = 0.0;  // size of the largest term, the cancellation scale
    for (int i = 0; i <= k; ++i) scale = std::max(scale, std::abs(direct_laguerre(i, a, x)));
    CHECK(std::abs(laguerre(k, a, x) - ref) <= 1e-11 * std::max(1.0, scale));
  }
}

TEST_CASE("low-order Laguerre values") {
  CHECK(laguerre(0, 2.5, 3.0) == 1.0);
  CHECK(laguerre(1, 2.5, 3.0) == doctest::Approx(1 + 2.5 - 3.0));
  CHECK(laguerre(2, 1.0, 0.5) == doctest::Approx(0.5 * 0.25 - 3 * 0.5 + 3));
  CHECK(laguerre(-1, 1.0, 0.5) == 0.0);
}

TEST_CASE("coefficients reproduce the polynomial, also for negative integer alpha") {
  testutil::Rng rng(22);
  for (int t = 0; t < 120; ++t) {
    const int n = rng.integer(0, 10);
    const double a = t % 2 ? -1.0 - 2.0 * n : rng.uniform(-3, 3);
    const auto c = laguerre_coefficients(n, a);
    REQUIRE(c.size() == size_t(n + 1));
    const double x = rng.uniform(0, 3);
    CHECK(horner(c, x).real() == doctest::Approx(direct_laguerre(n, a, x)).epsilon(1e-11));
  }
}

TEST_CASE("roots and their closed-form sums") {
  for (int n = 1; n <= 8; ++n) {
    const double a = -1.0 - 2.0 * n;
    const auto r = laguerre_roots(n, a);
    REQUIRE(r.size() == size_t(n));
    const auto c = laguerre_coefficients(n, a);
    std::complex<double> s1 = 0.0, s2 = 0.0;
    for (auto y : r) {
      CHECK(std::abs(horner(c, y)) <= 1e-9 * std::abs(c.back()) * std::pow(1 + std::abs(y), n));
      s1 += y;
      s2 += y * y;
    }
    CHECK(s1.real() == doctest::Approx(laguerre_root_sum(n, a)).epsilon(1e-9));
    CHECK(s2.real() == doctest::Approx(laguerre_root_square_sum(n, a)).epsilon(1e-9));
    CHECK(std::abs(s1.imag()) < 1e-8);
  }
}

TEST_CASE("poly_roots on a known cubic") {
  // (x-1)(x-2)(x+3) = x^3 - 7x + 6
  auto r = poly_roots(std::vector<double>{6, -7, 0, 1});
  std::sort(r.begin(), r.end(), [](auto a, auto b) { return a.real() < b.real(); });
  REQUIRE(r.size() == 3);
  CHECK(r[0].real() == doctest::Approx(-3));
  CHECK(r[1].real() == doctest::Approx(1));
  CHECK(r[2].real() == doctest::Approx(2));
}

TEST_CASE("factorial and generalized binomial") {
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(6) == 720.0);
  CHECK(binom_general(5.0, 2) == doctest::Approx(10.0));
  CHECK(binom_general(-1.5, 2) == doctest::Approx(-1.5 * -2.5 / 2));
  CHECK(binom_general(3.0, 0) == 1.0);
}
