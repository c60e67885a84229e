#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "nibm/dgop.hpp"
#include "nibm/phase.hpp"
#include "nibm/quadrature.hpp"
#include "nibm/special_fn.hpp"

namespace nibm {

// ((z+beta)(z-alpha) / ((z-beta)(z+alpha)))^{1/4}, cut on [-beta,-alpha] u [alpha,beta], -> 1 at infinity.
inline cplx gamma_fn(cplx z, double alpha, double beta) {
  return std::pow((z + beta) / (z + alpha), 0.25) * std::pow((z - alpha) / (z - beta), 0.25);
}

inline cplx gamma_fn(cplx z, const PhaseData& pd) { return gamma_fn(z, pd.alpha, pd.beta); }

// pi (alpha + beta) / (4 K~) times the integral of 1/sqrt((x^2-alpha^2)(x^2-beta^2)) from beta to z,
// written as (pi/4)(1 - F(beta/z; k)/K) with the incomplete first-kind integral.
inline cplx u_fn(cplx z, const PhaseData& pd, Side side = Side::none) {
  if (pd.regime != Regime::supercritical) throw regime_error("u_fn: supercritical only");
  if (z == cplx(0.0)) throw domain_error("u_fn: z = 0 lies on the cut");
  Side s = detail::side_of(z, side);
  if (z.imag() == 0.0 && std::abs(z.real()) < pd.beta && s == Side::none)
    throw domain_error("u_fn: on the cut without side flag");
  Side sw = s == Side::upper ? Side::lower : s == Side::lower ? Side::upper : Side::none;
  cplx F = incomplete_elliptic(pd.beta / z, pd.k, sw).F;
  return pi / 4.0 * (1.0 - F / pd.K);
}

// The same integral by Gauss-Legendre along beta -> waypoints... -> z; the first leg starts at the branch point.
inline cplx u_path(cplx z, const PhaseData& pd, std::initializer_list<cplx> waypoints = {}, int panels = 64) {
  double a = pd.alpha, b = pd.beta;
  auto integrand = [&](cplx x) {
    return 1.0 / (detail::sqrt_pair(x, a, Side::none) * detail::sqrt_pair(x, b, Side::none));
  };
  std::vector<cplx> pts(waypoints);
  pts.push_back(z);
  cplx d = pts[0] - b, sd = std::sqrt(d);
  cplx acc = integrate_gl(
      [&](double t) {
        cplx x = b + d * t * t;
        return 2.0 * sd / (detail::sqrt_pair(x, a, Side::none) * std::sqrt(x + b));
      },
      0.0, 1.0, panels, 30);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cplx p = pts[i - 1], q = pts[i];
    acc += integrate_gl([&](double t) { return integrand(p + (q - p) * t) * (q - p); }, 0.0, 1.0, panels, 30);
  }
  return pi * (a + b) / (4.0 * pd.Kt) * acc;
}

// Entries of the conjugated model solution: p_n ~ e^{ng} M11, Cp_n ~ e^{-n(g-l)} M12, ...
struct ModelM {
  PhaseData pd;
  double eps = 0.0;
  double tau = 0.0;
};

inline ModelM make_model(int n, double T, double tau) {
  ModelM mm{phase_data(T), half_parity(n), tau};
  if (mm.pd.regime != Regime::supercritical) throw regime_error("make_model: supercritical only");
  return mm;
}

struct MEntries {
  cplx m11, m12, m21, m22;
  cplx det() const { return m11 * m22 - m12 * m21; }
};

inline MEntries model_entries(cplx z, const ModelM& mm, Side side = Side::none) {
  const PhaseData& pd = mm.pd;
  double ax = std::abs(z.real());
  if (z.imag() == 0.0 && ax >= pd.alpha && ax <= pd.beta) throw domain_error("model_entries: z on a cut");
  double q = pd.q, c = pi * (mm.tau - mm.eps);
  cplx g = gamma_fn(z, pd), u = u_fn(z, pd, side);
  cplx gp = 0.5 * (g + 1.0 / g), gm = g - 1.0 / g;
  double f = theta(0.0, q).th3.real() / theta(c, q).th3.real();
  auto th3 = [&](cplx w) { return theta(w, q).th3; };
  cplx um = th3(u - pi / 4), up = th3(u + pi / 4);
  return {gp * f * th3(u - pi / 4 - c) / um, pi * gm * f * th3(u + pi / 4 + c) / up,
          gm / (4.0 * pi) * f * th3(u + pi / 4 - c) / up, gp * f * th3(u - pi / 4 + c) / um};
}

// Main terms of gamma_{n,n}^2.
inline double gamma_sq_subcritical(double T) { return 1.0 / T; }

inline double sigma_of(int n, double T) { return (1.0 - T / T_crit) * std::pow(2.0, 2.0 / 3.0) * std::pow(n, 2.0 / 3.0); }

inline double T_of_sigma(int n, double sigma) {
  return T_crit * (1.0 - std::pow(2.0, -2.0 / 3.0) * sigma * std::pow(n, -2.0 / 3.0));
}

// q_sigma is the Hastings-McLeod value q(sigma).
inline double gamma_sq_critical(int n, double T, double tau, double q_sigma) {
  double e = half_parity(n), n13 = std::cbrt(static_cast<double>(n));
  return (1.0 - std::pow(2.0, 5.0 / 3.0) / n13 * q_sigma * std::cos(2 * pi * (tau + e)) +
          std::pow(2.0, 4.0 / 3.0) / (n13 * n13) * q_sigma * q_sigma * std::cos(4 * pi * tau)) /
         T;
}

inline double gamma_sq_supercritical(int n, double T, double tau) {
  auto pd = phase_data(T);
  if (pd.regime != Regime::supercritical) throw regime_error("gamma_sq_supercritical: T must exceed pi^2");
  double dn = jacobi_dn(2.0 * pd.Kt * (tau + 0.5 + half_parity(n)), pd.kt);
  return dn * dn / (4.0 * pd.Et * pd.Et);
}

// Regime chosen from (n, T); inside the critical window q_sigma must be supplied.
inline double gamma_sq_asymptotic(int n, double T, double tau, double q_sigma = std::nan("")) {
  if (in_critical_window(T, n) && std::isfinite(q_sigma)) return gamma_sq_critical(n, T, tau, q_sigma);
  if (T < T_crit) return gamma_sq_subcritical(T);
  if (T == T_crit) throw regime_error("gamma_sq_asymptotic: critical T needs q(sigma)");
  return gamma_sq_supercritical(n, T, tau);
}

}  // namespace nibm
