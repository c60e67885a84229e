#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "nibm/quadrature.hpp"
#include "nibm/special_fn.hpp"

namespace nibm {

constexpr double T_crit = pi * pi;

enum class Regime { subcritical, critical, supercritical };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    default: return "supercritical";
  }
}

struct regime_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhaseData {
  double T;
  Regime regime;
  double k = 0, kt = 0;
  double alpha = 0, beta = 0;
  double K = pi / 2, E = pi / 2, Kt = pi / 2, Et = pi / 2;
  double q = 0;
  double t_c = std::numeric_limits<double>::quiet_NaN();
  double lagrange_l = 0;
};

inline double ktilde(double k) { return 2.0 * std::sqrt(k) / (1.0 + k); }

// 4 K~ E~ written through the Landen transform, 4 K (2E - (1-k^2) K)
inline double T_of_k(double k) {
  auto c = complete_elliptic(k);
  return 4.0 * c.K * (2.0 * c.E - (1.0 - k * k) * c.K);
}

inline double solve_k_from_T(double T) {
  if (!(T > T_crit)) throw regime_error("solve_k_from_T: T must exceed pi^2");
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (T_of_k(hi) < T) throw regime_error("solve_k_from_T: T beyond the representable range");
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    double mid = 0.5 * (lo + hi);
    (T_of_k(mid) < T ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline PhaseData phase_data(double T) {
  if (!(T > 0)) throw domain_error("phase_data: T must be positive");
  PhaseData pd{};
  pd.T = T;
  if (T <= T_crit) {
    pd.regime = T < T_crit ? Regime::subcritical : Regime::critical;
    pd.beta = 2.0 / std::sqrt(T);
    pd.lagrange_l = -std::log(T) - 1.0;
    if (T == T_crit) pd.t_c = T / 2;
    return pd;
  }
  pd.regime = Regime::supercritical;
  pd.k = solve_k_from_T(T);
  pd.kt = ktilde(pd.k);
  auto c = complete_elliptic(pd.k), ct = complete_elliptic(pd.kt, (1.0 - pd.k) / (1.0 + pd.k));
  pd.K = c.K;
  pd.E = c.E;
  pd.Kt = ct.K;
  pd.Et = ct.E;
  pd.beta = 1.0 / (2.0 * pd.E - (1.0 - pd.k * pd.k) * pd.K);
  pd.alpha = pd.k * pd.beta;
  pd.q = nome_from(pd.k);
  pd.t_c = 2.0 / pd.alpha * (pd.E - (1.0 - pd.k) * pd.K);
  pd.lagrange_l = std::log(pd.beta * pd.beta - pd.alpha * pd.alpha) +
                  pd.K * pd.beta * (1.0 + pd.k * pd.k) - 2.0 * (1.0 + std::log(2.0));
  return pd;
}

// t^c via the k-tilde expression
inline double t_c_tilde(const PhaseData& pd) {
  double kc = (1.0 - pd.k) / (1.0 + pd.k);
  return 4.0 / (pd.kt * pd.kt) * pd.Et * (pd.Et - kc * kc * pd.Kt);
}

// Width of the critical window |T - pi^2| <= 10 pi^2 2^{-2/3} n^{-2/3}.
inline bool in_critical_window(double T, int n) {
  return std::abs(T - T_crit) <= 10.0 * T_crit * std::pow(2.0, -2.0 / 3.0) * std::pow(n, -2.0 / 3.0);
}

namespace detail {

// sqrt(w) where a real negative w is read as the limit from Im w -> 0 with sign of `side`.
inline cplx sqrt_side(cplx w, Side side) {
  if (side != Side::none && w.imag() == 0.0 && w.real() < 0.0)
    return cplx(0.0, static_cast<int>(side) * std::sqrt(-w.real()));
  return std::sqrt(w);
}

// (z-a)^{1/2} (z+a)^{1/2}: ~ z at infinity, cut on [-a, a]
inline cplx sqrt_pair(cplx z, double a, Side side) {
  return sqrt_side(z - a, side) * sqrt_side(z + a, side);
}

inline Side side_of(cplx z, Side side) {
  if (z.imag() > 0) return Side::upper;
  if (z.imag() < 0) return Side::lower;
  return side;
}

}  // namespace detail

inline double rho_T(double x, const PhaseData& pd) {
  double ax = std::abs(x);
  if (ax >= pd.beta) return 0.0;
  if (pd.regime != Regime::supercritical)
    return pd.T / (2.0 * pi) * std::sqrt(4.0 / pd.T - x * x);
  if (ax <= pd.alpha) return 1.0;
  double arg = std::sqrt(std::max(0.0, (1.0 - ax * ax / (pd.beta * pd.beta)) / (1.0 - pd.k * pd.k)));
  return heuman_lambda(std::min(arg, 1.0), pd.k);
}

// Density on (alpha, beta) from the two real integrals over (x, beta).
inline double rho_T_integral(double x, const PhaseData& pd) {
  double ax = std::abs(x);
  if (pd.regime != Regime::supercritical || ax <= pd.alpha || ax >= pd.beta) return rho_T(x, pd);
  double a = pd.alpha, b = pd.beta, L = b - ax;
  // s = beta - L u^2
  auto f1 = [&](double u) {
    double s = b - L * u * u;
    return 2.0 * b * std::sqrt(L) / std::sqrt((s * s / (a * a) - 1.0) * (b + s));
  };
  auto f2 = [&](double u) {
    double s = b - L * u * u;
    return 2.0 * L * std::sqrt(L) * u * u * std::sqrt(b + s) / (b * std::sqrt(s * s / (a * a) - 1.0));
  };
  double i1 = integrate_gl(f1, 0.0, 1.0, 32, 30), i2 = integrate_gl(f2, 0.0, 1.0, 32, 30);
  return 2.0 / (pi * a) * (pd.E * i1 - pd.K * i2);
}

inline cplx g_prime(cplx z, const PhaseData& pd, Side side = Side::none) {
  if (pd.regime != Regime::supercritical) {
    if (z.imag() == 0.0 && std::abs(z.real()) < pd.beta && side == Side::none)
      throw domain_error("g_prime: on the support without side flag");
    return 0.5 * pd.T * (z - detail::sqrt_pair(z, pd.beta, side));
  }
  Side s = detail::side_of(z, side);
  if (s == Side::none) {
    if (std::abs(z.real()) < pd.beta) throw domain_error("g_prime: on the support without side flag");
    s = Side::upper;
  }
  auto fe = incomplete_elliptic(z / pd.alpha, pd.k, s);
  double sg = static_cast<int>(s);
  return 2.0 * (pd.K / pd.beta * z - pd.K * fe.E + pd.E * fe.F - sg * cplx(0.0, pi / 2));
}

// The representation with integrals from beta, by quadrature along the segment [beta, z].
inline cplx g_prime_alt(cplx z, const PhaseData& pd) {
  if (pd.regime != Regime::supercritical) throw regime_error("g_prime_alt: supercritical only");
  double a = pd.alpha, b = pd.beta;
  // s = beta + (z - beta) u^2 removes the square-root endpoint singularity
  cplx dz = z - b, sdz = std::sqrt(dz);
  auto ra = [&](cplx s) { return detail::sqrt_pair(s, a, Side::none); };
  auto f1 = [&](double u) -> cplx {
    cplx s = b + dz * u * u;
    return 2.0 * sdz / (ra(s) * std::sqrt(s + b));
  };
  auto f2 = [&](double u) -> cplx {
    cplx s = b + dz * u * u;
    return 2.0 * u * u * dz * sdz * std::sqrt(s + b) / ra(s);
  };
  cplx I1 = integrate_gl(f1, 0.0, 1.0, 64, 30), I2 = integrate_gl(f2, 0.0, 1.0, 64, 30);
  return 2.0 * pd.K * z / b - 2.0 * pd.E * b * I1 - 2.0 * pd.K / b * I2;
}

inline cplx g_value(cplx z, const PhaseData& pd, Side side = Side::none) {
  double b = pd.beta;
  if (z.imag() == 0.0 && z.real() <= b && side == Side::none)
    throw domain_error("g_value: on (-inf, beta] without side flag");
  Side s = detail::side_of(z, side);
  auto logside = [&](cplx w) {
    if (w.imag() == 0.0 && w.real() < 0.0 && s != Side::none)
      return cplx(std::log(-w.real()), static_cast<int>(s) * pi);
    return std::log(w);
  };
  if (pd.regime != Regime::supercritical) {
    cplx r = detail::sqrt_pair(z, b, s);
    return pd.T / 4.0 * z * (z - r) - logside(z - r) - 0.5 + std::log(2.0) - std::log(pd.T);
  }
  double a = pd.alpha;
  cplx rb = detail::sqrt_pair(z, b, s), ra = detail::sqrt_pair(z, a, s);
  // rb*ra - z^2 tends to -(a^2+b^2)/2; form it without cancellation
  cplx w = z * z;
  cplx prod_minus = (rb * ra - w);
  if (std::abs(w) > 4.0 * b * b) {
    cplx p = (w - b * b) * (w - a * a);
    prod_minus = (p - w * w) / (rb * ra + w);
  }
  return z * g_prime(z, pd, s) + pd.K / b * prod_minus + logside(rb + ra) +
         pd.K * b / 2.0 * (1.0 + pd.k * pd.k) - 1.0 - std::log(2.0);
}

// g+(x) + g-(x) - T x^2/2 - l on the real line
inline double variational_residual(double x, const PhaseData& pd) {
  if (x > pd.beta) return (2.0 * g_value(x, pd) - pd.T * x * x / 2.0 - pd.lagrange_l).real();
  cplx s = g_value(x, pd, Side::upper) + g_value(x, pd, Side::lower);
  return s.real() - pd.T * x * x / 2.0 - pd.lagrange_l;
}

// Fourth derivative at 0 of the continuation of g through (-alpha, alpha).
inline double g4_at_zero(const PhaseData& pd) {
  if (pd.regime != Regime::supercritical) throw regime_error("g4_at_zero: supercritical only");
  double k2 = pd.k * pd.k;
  return 2.0 / (pd.alpha * pd.alpha * pd.alpha) * ((1.0 + k2) * pd.E - (1.0 - k2) * pd.K);
}

inline double pearcey_d(const PhaseData& pd) {
  if (pd.regime != Regime::supercritical) throw regime_error("pearcey_d: supercritical only");
  return std::pow(g4_at_zero(pd) / 6.0, 0.25);
}

inline double tacnode_d() { return std::pow(2.0, -5.0 / 3.0) * pi; }

}  // namespace nibm
