#pragma once

#include <complex>
#include <vector>

namespace rabi::special {

// Generalized Laguerre L_k^(alpha)(x) by the three-term recurrence.
// Any real alpha is accepted; L_{-1} == 0 by convention.
double laguerre(int k, double alpha, double x);

// Coefficients c_i of x^i (i = 0..n) of L_n^(alpha); valid for negative
// integer alpha as well (generalized binomial).
std::vector<double> laguerre_coefficients(int n, double alpha);

// Complex roots of L_n^(alpha).
std::vector<std::complex<double>> laguerre_roots(int n, double alpha);

// Closed-form root sums of L_n^(alpha): sum y_j and sum y_j^2.
double laguerre_root_sum(int n, double alpha);
double laguerre_root_square_sum(int n, double alpha);

// Roots of sum_i c_i x^i via companion-matrix eigenvalues, then Newton-polished.
std::vector<std::complex<double>> poly_roots(const std::vector<std::complex<double>>& c);
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c);

double factorial(int n);
double binom_general(double t, int m);

}  // namespace rabi::special
