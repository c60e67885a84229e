#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nibm/dgop.hpp"
#include "nibm/phase.hpp"
#include "nibm/quadrature.hpp"

namespace nibm {

struct WindingDistribution {
  int n = 0;
  double T = 0.0;
  int omega_max = 0;
  int quad_points = 0;
  std::vector<double> probs;
  double residual = 0.0;
  double max_imag = 0.0;
  double clipped = 0.0;
  double prob(int omega) const {
    return std::abs(omega) > omega_max ? 0.0 : probs[static_cast<std::size_t>(omega + omega_max)];
  }
};

// P(omega) = int_0^1 H_n(T; tau - eps)/H_n(T; eps) e^{-2 pi i omega tau} dtau by the periodic trapezoid rule.
inline WindingDistribution winding_distribution(int n, double T, int omega_max, int quad_points = 256) {
  if (n < 1 || !(T > 0.0) || omega_max < 0) throw domain_error("winding_distribution: bad arguments");
  if (quad_points < 4 * omega_max + 8) throw domain_error("winding_distribution: quad_points < 4 Omega + 8");
  double e = half_parity(n), h0 = hankel_log(n, T, e);
  std::vector<double> ratio(quad_points);
  for (int j = 0; j < quad_points; ++j) ratio[j] = std::exp(hankel_log(n, T, double(j) / quad_points - e) - h0);
  WindingDistribution wd;
  wd.n = n;
  wd.T = T;
  wd.omega_max = omega_max;
  wd.quad_points = quad_points;
  double total = 0.0;
  for (int w = -omega_max; w <= omega_max; ++w) {
    cplx acc = 0.0;
    for (int j = 0; j < quad_points; ++j) acc += ratio[j] * std::polar(1.0, -2.0 * pi * w * j / quad_points);
    acc /= double(quad_points);
    wd.max_imag = std::max(wd.max_imag, std::abs(acc.imag()));
    double p = acc.real();
    if (p < -1e-8) throw std::runtime_error("winding_distribution: negative probability");
    if (p < 0.0) {
      wd.clipped += -p;
      p = 0.0;
    }
    wd.probs.push_back(p);
    total += p;
  }
  if (wd.max_imag > 1e-10) throw std::runtime_error("winding_distribution: imaginary part above 1e-10");
  wd.residual = std::abs(1.0 - total);
  return wd;
}

// Supercritical limit law q^{omega^2} sqrt(pi / (2 K~)).
struct DiscreteNormal {
  double q = 0.0, normalizer = 0.0;
  double prob(int omega) const { return std::pow(q, double(omega) * omega) * normalizer; }
};

inline DiscreteNormal discrete_normal(double T) {
  auto pd = phase_data(T);
  if (pd.regime != Regime::supercritical) throw regime_error("discrete_normal: T must exceed pi^2");
  return {pd.q, std::sqrt(pi / (2.0 * pd.Kt))};
}

// Critical-window predictions for P(0) and P(+-1) through the n^{-2/3} term.
inline double winding_critical_p0(int n, double q_sigma) {
  double n13 = std::cbrt(2.0 * n);
  return 1.0 - q_sigma / n13 + q_sigma * q_sigma / (n13 * n13);
}

inline double winding_critical_p1(int n, double q_sigma) {
  double n13 = std::cbrt(static_cast<double>(n));
  return q_sigma / (std::pow(2.0, 4.0 / 3.0) * n13) - q_sigma * q_sigma / (std::pow(2.0, 5.0 / 3.0) * n13 * n13);
}

// log H_n(T; tau - eps)/H_n(T; eps) as int_eps^{eps+tau} (eps + tau - v)(T^2 gamma_nn^2(v) - T) dv.
inline double log_hankel_via_ode(int n, double T, double tau, int panels = 4, int m = 12) {
  double e = half_parity(n);
  if (tau == 0.0) return 0.0;
  return integrate_gl([&](double v) { return (e + tau - v) * (T * T * gamma_sq_nn(n, T, v) - T); }, e, e + tau, panels,
                      m);
}

}  // namespace nibm
