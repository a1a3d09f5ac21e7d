#include "rabi/strongpert.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/special.hpp"

namespace rabi::strong {

AdiabaticParams adiabatic_params(const ModelParams& p) {
  p.validate();
  AdiabaticParams a;
  a.beta = 0.5 * (p.g1 + p.g2);
  a.lambda_asym = 0.5 * (p.g1 - p.g2);
  a.displacement = a.beta / p.omega;
  a.laguerre_arg = 4 * a.displacement * a.displacement;
  return a;
}

double displaced_overlap(int M, int N, double al) {
  if (M < 0 || N < 0) return 0.0;
  const double x = 4 * al * al;
  const int lo = std::min(M, N), d = std::abs(N - M);
  if (d > 0 && al == 0.0) return 0.0;
  // (2 al)^d sqrt(lo!/hi!) with the sign (-1)^d on the M >= N branch
  const double logmag = -2 * al * al + (d > 0 ? d * std::log(2 * std::abs(al)) : 0.0) +
                        0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + d + 1.0));
  double sign = (al < 0 && d % 2) ? -1.0 : 1.0;
  if (M > N && d % 2) sign = -sign;
  return sign * std::exp(logmag) * special::laguerre(lo, d, x);
}

double displaced_a(int M, int N, double al) {
  return std::sqrt(double(N)) * displaced_overlap(M, N - 1, al) - al * displaced_overlap(M, N, al);
}

double displaced_adag(int M, int N, double al) {
  return std::sqrt(N + 1.0) * displaced_overlap(M, N + 1, al) - al * displaced_overlap(M, N, al);
}

std::array<double, 2> adiabatic_energies(int N, const ModelParams& p) {
  if (N < 0) throw Error(Errc::IndexOutOfRange, "N must be >= 0");
  const AdiabaticParams a = adiabatic_params(p);
  const double x = a.laguerre_arg;
  const double EN = p.omega * (N - a.displacement * a.displacement);
  const double s = std::exp(-2 * a.displacement * a.displacement) *
                   std::abs(p.omega0 * special::laguerre(N, 0, x) +
                            a.lambda_asym * 2 * a.displacement *
                                (special::laguerre(N - 1, 1, x) + special::laguerre(N, 1, x)));
  return {EN + s, EN - s};
}

Eigen::Matrix2cd adiabatic_block(int N, const ModelParams& p) {
  if (N < 0) throw Error(Errc::IndexOutOfRange, "N must be >= 0");
  const AdiabaticParams a = adiabatic_params(p);
  const double al = a.displacement;
  const std::complex<double> I(0.0, 1.0);
  const double EN = p.omega * (N - al * al);
  // <N_-|(a - a^+)|N_+>; <N_+|...|N_-> follows from the reflection identities
  const double amp = displaced_a(N, N, al) - displaced_adag(N, N, al);
  const std::complex<double> hmp = -I * p.omega0 * displaced_overlap(N, N, al) + I * a.lambda_asym * amp;
  Eigen::Matrix2cd H;
  H << EN, hmp, std::conj(hmp), EN;
  return H;
}

std::vector<double> adiabatic_levels(const ModelParams& p, int count) {
  std::vector<double> v;
  for (int N = 0; N <= count; ++N) {
    const auto e = adiabatic_energies(N, p);
    v.push_back(e[0]);
    v.push_back(e[1]);
  }
  std::sort(v.begin(), v.end());
  v.resize(std::max(0, count));
  return v;
}

std::vector<std::string> adiabatic_warnings(const ModelParams& p) {
  const AdiabaticParams a = adiabatic_params(p);
  std::vector<std::string> w;
  if (a.displacement < 1.0) w.push_back("beta/omega < 1: adiabatic regime not reached");
  if (std::abs(p.omega0) > 0.5 * p.omega) w.push_back("omega0 not small compared with omega");
  if (std::abs(a.lambda_asym) > 0.5 * p.omega) w.push_back("|g1-g2|/2 not small");
  return w;
}

SqueezedParams squeezed_params(const ModelParams& p) {
  p.validate();
  if (!(p.g1 > p.g2)) throw Error(Errc::UndefinedRegime, "squeezed operators need g1 > g2");
  SqueezedParams s;
  const double gm2 = (p.g1 - p.g2) * (p.g1 + p.g2);
  s.g_minus = std::sqrt(gm2);
  s.omega_g = p.omega * (p.g1 * p.g1 + p.g2 * p.g2) / gm2;
  s.r = std::atanh(p.g2 / p.g1);
  s.shift = p.omega * p.g2 * p.g2 / gm2;
  s.perturbation_strength = p.omega * p.g1 * p.g2 / gm2;
  return s;
}

double squeezed_spectrum(int n, int sign, const ModelParams& p) {
  if (n < 0 || (sign != 1 && sign != -1)) throw Error(Errc::IndexOutOfRange, "need n >= 0 and sign = +/-1");
  const SqueezedParams s = squeezed_params(p);
  // pair {|n-1,+>, |n,->} of A^+A: centre omega_g (n - 1/2), half splitting from omega0 - omega_g/2
  const double det = 2 * p.omega0 - s.omega_g;
  // n = 0 has only |0,->; the square root would hide the sign of det
  if (n == 0) return (sign < 0 ? -p.omega0 : p.omega0 - s.omega_g) + s.shift;
  return s.omega_g * (n - 0.5) + sign * 0.5 * std::sqrt(det * det + 4.0 * n * s.g_minus * s.g_minus) + s.shift;
}

std::vector<double> squeezed_levels(const ModelParams& p, int count) {
  std::vector<double> v{squeezed_spectrum(0, -1, p)};
  for (int n = 1; n <= count; ++n) {
    v.push_back(squeezed_spectrum(n, -1, p));
    v.push_back(squeezed_spectrum(n, +1, p));
  }
  std::sort(v.begin(), v.end());
  v.resize(std::max(0, count));
  return v;
}

std::vector<std::string> squeezed_warnings(const ModelParams& p) {
  const SqueezedParams s = squeezed_params(p);
  std::vector<std::string> w;
  if (s.perturbation_strength > 0.1 * p.omega)
    w.push_back("omega g1 g2/g_-^2 not small: first-order result unreliable");
  if (std::abs(p.omega0) < 2 * p.omega) w.push_back("omega0 not large compared with omega");
  return w;
}

}  // namespace rabi::strong
