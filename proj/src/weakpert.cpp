#include "rabi/weakpert.hpp"

#include <algorithm>
#include <cmath>

namespace rabi::weak {

namespace {

double half_detuning_sq(const ModelParams& p) {
  const double c = 0.5 - p.omega0 / p.omega;
  return c * c;
}

void check_index(int n, int k) {
  const bool ok = (n >= 0 && (k == 0 || k == 1)) || (n == -1 && k == 1);
  if (!ok) throw Error(Errc::InvalidIndex, "JC level (n,k) must have n >= 0, k in {0,1}, or be (-1,1)");
}

}  // namespace

JCLevel jc_level(int n, int k, const ModelParams& p) {
  check_index(n, k);
  p.validate();
  JCLevel L;
  L.n = n;
  L.k = k;
  if (n == -1) {
    L.E0 = -p.omega0;
    L.Omega_n = std::abs(p.omega0 + 0.5 * p.omega);
    L.alpha_n = 0.0;
    return L;
  }
  const double det = p.omega0 - 0.5 * p.omega;
  const double s = p.g1 * std::sqrt(n + 1.0);
  L.Omega_n = std::hypot(det, s);
  L.alpha_n = std::atan2(s, det);
  L.E0 = p.omega * (n + 0.5) + (k == 0 ? 1.0 : -1.0) * L.Omega_n;
  return L;
}

double second_order(int n, int k, const ModelParams& p) {
  check_index(n, k);
  p.validate();
  const double w = p.omega, w0 = p.omega0;
  const double q = p.g1 * p.g1 / (2 * w);
  const double g22 = p.g2 * p.g2;
  const double guard = tol::sing * w;
  auto den_ok = [&](double d) {
    if (std::abs(d) < guard) throw Error(Errc::NearDegeneracy, "second-order denominator vanishes; use avoided_energies");
    return d;
  };
  if (n == -1) return -0.5 * g22 / den_ok(w0 + 0.5 * w - q);

  const double Om = jc_level(n, k, p).Omega_n;
  den_ok(Om);
  const double plus = Om + w0 - 0.5 * w + (n + 1) * q;
  const double minus = Om - w0 + 0.5 * w - (n + 1) * q;
  double r;
  if (k == 0) {
    r = -(n + 2) / (4 * Om) * minus / den_ok(w - Om - q);
    if (n > 0) r += n / (4 * Om) * plus / den_ok(w + Om + q);
  } else {
    r = -(n + 2) / (4 * Om) * plus / den_ok(w + Om - q);
    if (n > 0) r += n / (4 * Om) * minus / den_ok(w - Om + q);
  }
  return g22 * r;
}

std::string case_name(Case c) {
  switch (c) {
    case Case::zero: return "0";
    case Case::a1: return "1a";
    case Case::b1: return "1b";
    case Case::a2: return "2a";
    case Case::b2: return "2b";
    case Case::avoided_p: return "general-p-avoided";
    case Case::crossing_p: return "general-p-crossing";
    case Case::minus1_avoided: return "minus1-avoided";
    case Case::minus1_crossing: return "minus1-crossing";
  }
  return "?";
}

Case parse_case(const std::string& s) {
  for (Case c : {Case::zero, Case::a1, Case::b1, Case::a2, Case::b2, Case::avoided_p, Case::crossing_p,
                 Case::minus1_avoided, Case::minus1_crossing})
    if (case_name(c) == s) return c;
  throw Error(Errc::InvalidCase, "unknown degeneracy case '" + s + "'");
}

DegeneracyLocus degeneracy_loci(Case c, int n, int p, int k, const ModelParams& pm) {
  ModelParams m = pm;
  m.g1 = m.g2 = 0.0;
  m.validate();
  const double w = m.omega, d = m.omega0 / w, c2 = half_detuning_sq(m);
  DegeneracyLocus L;
  L.case_label = c;
  double x = 0.0, e = 0.0;  // g1^2/(2w^2) and E_at/w + x
  switch (c) {
    case Case::a1:
    case Case::b1:
      c = Case::avoided_p;
      k = (L.case_label == Case::a1) ? 0 : 1;
      p = 1;
      break;
    case Case::a2:
    case Case::b2:
      if (n < 2) throw Error(Errc::InvalidIndex, "cases 2a/2b need n >= 2");
      c = Case::avoided_p;
      k = (L.case_label == Case::a2) ? 0 : 1;
      p = 1;
      n -= 2;
      break;
    case Case::zero:
      c = Case::minus1_avoided;
      p = 1;
      break;
    default:
      break;
  }
  if (p < 1) throw Error(Errc::InvalidIndex, "p must be >= 1");
  switch (c) {
    case Case::avoided_p: {
      if (n < 0 || (k != 0 && k != 1)) throw Error(Errc::InvalidIndex, "need n >= 0 and k in {0,1}");
      const double r = std::sqrt((n + 1.0) * (n + 2.0 * p + 1) + c2);
      x = n + p + 1 + (k == 0 ? -r : r);
      e = n + p + 0.5;
      L.lower = {n, k};
      L.upper = {n + 2 * p, 1};
      L.avoided = true;
      break;
    }
    case Case::crossing_p: {
      if (n < 0 || (k != 0 && k != 1)) throw Error(Errc::InvalidIndex, "need n >= 0 and k in {0,1}");
      const double r = std::sqrt((n + 1.0) * (n + 2.0 * p) + c2);
      x = n + p + 0.5 + (k == 0 ? -r : r);
      e = n + p;
      L.lower = {n, k};
      L.upper = {n + 2 * p - 1, 1};
      L.avoided = false;
      break;
    }
    case Case::minus1_avoided:
      x = d + p - 0.5;
      e = p - 0.5;
      L.lower = {-1, 1};
      L.upper = {2 * p - 1, 1};
      L.avoided = true;
      break;
    case Case::minus1_crossing:
      x = d + p - 1.0;
      e = p - 1.0;
      L.lower = {-1, 1};
      L.upper = {2 * p - 2, 1};
      L.avoided = false;
      break;
    default:
      throw Error(Errc::InvalidCase, "unhandled case");
  }
  if (x < -1e-14) throw Error(Errc::NoLocus, case_name(L.case_label) + ": locus requires g1^2 < 0");
  x = std::max(x, 0.0);
  L.n = L.lower[0];
  L.k = L.lower[1];
  L.p = p;
  L.g1_sq_over_2w = x * w;
  L.g1 = w * std::sqrt(2 * x);
  L.E_at = w * (e - x);
  L.epsilon_at = e;
  // squaring can introduce spurious roots; confirm the degeneracy directly
  m.g1 = L.g1;
  const double Ea = jc_level(L.lower[0], L.lower[1], m).E0, Eb = jc_level(L.upper[0], L.upper[1], m).E0;
  if (std::abs(Ea - Eb) > 1e-8 * w * (1 + std::abs(e)) || std::abs(Ea - L.E_at) > 1e-8 * w * (1 + std::abs(e)))
    throw Error(Errc::NoLocus, case_name(L.case_label) + ": no degeneracy on this branch");
  return L;
}

std::vector<DegeneracyLocus> all_loci(const ModelParams& pm, double eps_max) {
  std::vector<DegeneracyLocus> out;
  auto add = [&](Case c, int n, int p, int k) {
    try {
      out.push_back(degeneracy_loci(c, n, p, k, pm));
    } catch (const Error& e) {
      if (e.code() != Errc::NoLocus) throw;
    }
  };
  for (int N = 0; N <= eps_max; ++N) {
    for (int p = 1; p <= N; ++p)
      for (int k = 0; k < 2; ++k) add(Case::crossing_p, N - p, p, k);
    add(Case::minus1_crossing, 0, N + 1, 1);
  }
  for (int M = 0; M + 0.5 <= eps_max; ++M) {
    for (int p = 1; p <= M; ++p)
      for (int k = 0; k < 2; ++k) {
        if (p == 1) add(k == 0 ? Case::a1 : Case::b1, M - 1, 1, k);
        else add(Case::avoided_p, M - p, p, k);
      }
    if (M == 0) add(Case::zero, -1, 1, 1);
    else add(Case::minus1_avoided, -1, M + 1, 1);
  }
  return out;
}

double gap(Case c, int n, const ModelParams& p) {
  p.validate();
  auto half_sin = [&](int m) { return std::sin(0.5 * jc_level(m, 0, p).alpha_n); };
  auto half_cos = [&](int m) { return std::cos(0.5 * jc_level(m, 0, p).alpha_n); };
  switch (c) {
    case Case::zero:
      return 2 * p.g2 * half_sin(1);
    case Case::a2:
    case Case::b2:
      if (n < 2) throw Error(Errc::InvalidIndex, "cases 2a/2b need n >= 2");
      return gap(c == Case::a2 ? Case::a1 : Case::b1, n - 2, p);
    case Case::a1:
    case Case::b1:
      if (n < 0) throw Error(Errc::InvalidIndex, "need n >= 0");
      return 2 * p.g2 * std::sqrt(n + 2.0) * (c == Case::a1 ? half_sin(n) : half_cos(n)) * half_sin(n + 2);
    default:
      throw Error(Errc::InvalidCase, case_name(c) + ": gap is O(g2^p), no closed form");
  }
}

std::array<double, 2> avoided_energies(int n, int k, const ModelParams& p) {
  check_index(n, k);
  const Case c = n == -1 ? Case::zero : (k == 0 ? Case::a1 : Case::b1);
  const int m = n == -1 ? 1 : n + 2;
  const double Ea = jc_level(n, k, p).E0, Eb = jc_level(m, 1, p).E0;
  const double D = gap(c, n, p);
  const double r = std::sqrt((Ea - Eb) * (Ea - Eb) + D * D);
  return {0.5 * (Ea + Eb + r), 0.5 * (Ea + Eb - r)};
}

std::vector<double> weak_levels(const ModelParams& p, int count, double window) {
  p.validate();
  if (count < 1) return {};
  const int nmax = 2 * count + 10 + static_cast<int>(4 * p.g1 * p.g1 / (p.omega * p.omega));
  // state index: (-1,1) -> 0, (n,k) -> 1 + 2n + k
  auto idx = [](int n, int k) { return n < 0 ? 0 : 1 + 2 * n + k; };
  const int S = 1 + 2 * (nmax + 1);
  std::vector<double> E(S);
  std::vector<bool> used(S, false);
  E[0] = jc_level(-1, 1, p).E0;
  for (int n = 0; n <= nmax; ++n)
    for (int k = 0; k < 2; ++k) E[idx(n, k)] = jc_level(n, k, p).E0;

  struct Pair {
    int n, k;
    double closeness;
  };
  std::vector<Pair> pairs;
  auto consider = [&](int n, int k) {
    const int a = idx(n, k), b = idx(n == -1 ? 1 : n + 2, 1);
    const Case c = n == -1 ? Case::zero : (k == 0 ? Case::a1 : Case::b1);
    const double D = gap(c, n, p);
    const double dE = std::abs(E[a] - E[b]);
    if (D > 0.0 && dE < window * D) pairs.push_back({n, k, dE / D});
  };
  consider(-1, 1);
  for (int n = 0; n + 2 <= nmax; ++n)
    for (int k = 0; k < 2; ++k) consider(n, k);
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.closeness < y.closeness; });

  std::vector<double> out;
  for (const auto& pr : pairs) {
    const int a = idx(pr.n, pr.k), b = idx(pr.n == -1 ? 1 : pr.n + 2, 1);
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    const auto e = avoided_energies(pr.n, pr.k, p);
    out.push_back(e[0]);
    out.push_back(e[1]);
  }
  for (int s = 0; s < S; ++s) {
    if (used[s]) continue;
    const int n = s == 0 ? -1 : (s - 1) / 2, k = s == 0 ? 1 : (s - 1) % 2;
    double e2 = 0.0;
    try {
      e2 = second_order(n, k, p);
    } catch (const Error& e) {
      if (e.code() != Errc::NearDegeneracy) throw;
    }
    out.push_back(E[s] + e2);
  }
  std::sort(out.begin(), out.end());
  out.resize(std::min<size_t>(out.size(), count));
  return out;
}

EventCount count_events(int N, const ModelParams& p) {
  if (N < 0) throw Error(Errc::InvalidIndex, "N must be >= 0");
  p.validate();
  const double c = std::abs(0.5 - p.omega0 / p.omega);
  const double slack = 1e-12;
  EventCount r;
  // crossings at N: k=0 family needs p >= 1/2 + c, k=1 family 1..N, plus E_{-1,1} = E_{2N,1}
  for (int q = 1; q <= N; ++q)
    if (q >= 0.5 + c - slack) ++r.crossings;
  r.crossings += N + 1;
  // avoided at N + 1/2: k=0 family needs p >= c, k=1 family 1..N, plus E_{-1,1} = E_{2N+1,1}
  for (int q = 1; q <= N; ++q)
    if (q >= c - slack) ++r.avoided;
  r.avoided += N + 1;
  return r;
}

}  // namespace rabi::weak
