#include <gtest/gtest.h>

#include "nibm/finite_kernel.hpp"

using namespace nibm;

TEST(HeatKernel, DualSeriesAgreeOnGrid) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double a = -pi + 0.61 * i - 2 * pi * std::floor((0.61 * i) / (2 * pi));
    double b = -pi + std::fmod(1.37 * i + 0.5, 2 * pi);
    double t = 0.05 + std::fmod(0.173 * i, 4.0);
    double tau = std::fmod(0.219 * i, 1.0);
    int n = 1 + i % 12;
    cplx u = heat_kernel_images(a, b, t, tau, n), v = heat_kernel_fourier(a, b, t, tau, n);
    worst = std::max(worst, std::abs(u - v) / std::max(1.0, std::abs(u)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(HeatKernel, LeadingImageAndNormalization) {
  int n = 10;
  double t = 1.0;
  EXPECT_GE(heat_kernel(0.4, 0.4, t, 0.0, n).real(), std::sqrt(n / (2 * pi * t)));
  EXPECT_LE(std::abs(heat_kernel_images(0.4, 0.4, t, 0.0, n) - heat_kernel_fourier(0.4, 0.4, t, 0.0, n)), 1e-12);
  for (double tt : {0.05, 1.0, 30.0}) {
    int M = 4000;
    cplx s = 0.0;
    for (int i = 0; i < M; ++i) s += heat_kernel(0.7, -pi + 2 * pi * i / M, tt, 0.0, n);
    EXPECT_NEAR(std::abs(s * (2 * pi / M) - 1.0), 0.0, 1e-10) << tt;
  }
}

TEST(HeatKernel, TauPeriodAndTwist) {
  for (double tau : {0.0, 0.3, 0.5}) {
    cplx a = heat_kernel_fourier(0.2, -1.0, 0.7, tau, 5), b = heat_kernel_fourier(0.2, -1.0, 0.7, tau + 1.0, 5);
    EXPECT_LE(std::abs(a - b), 1e-14);
    cplx c = heat_kernel_images(0.2, -1.0 + 2 * pi, 0.7, tau, 5);
    EXPECT_LE(std::abs(c - a * std::polar(1.0, -2 * pi * tau)), 1e-12);
  }
  EXPECT_THROW(heat_kernel(0.0, 0.0, 0.0, 0.0, 4), domain_error);
}

TEST(KarlinMcGregor, OneAndTwoParticles) {
  EXPECT_LE(std::abs(km_determinant({0.3}, {-1.2}, 0.8, 0.0) - heat_kernel(0.3, -1.2, 0.8, 0.0, 1)), 1e-15);
  cplx v = km_determinant({-0.5, 1.0}, {-2.0, 0.4}, 1.3, 0.5);
  EXPECT_GE(v.real(), 0.0);
  EXPECT_LE(std::abs(v.imag()), 1e-10);
  EXPECT_THROW(km_determinant({0.1, 0.1}, {0.2, 0.3}, 1.0, 0.5), domain_error);
  EXPECT_THROW(km_determinant({0.1, 4.0}, {0.2, 0.3}, 1.0, 0.5), domain_error);
}

TEST(STransform, PositivityConjugationParseval) {
  auto c = correlation_context(8, 12.0, 0.5);
  auto s0 = s_transform(c, 0, 3.0, 0.0);
  EXPECT_GT(s0.value().real(), 0.0);
  EXPECT_LE(std::abs(s0.value().imag()), 1e-15);
  for (int k = 0; k < 8; ++k) {
    cplx p = s_transform(c, k, 3.0, 0.9).value(), m = s_transform(c, k, 3.0, -0.9).value();
    EXPECT_LE(std::abs(p - std::conj(m)), 1e-12 * std::max(1.0, std::abs(p)));
  }
  double t = 5.0;
  int M = 2 * static_cast<int>(c.lm.size()) + 16;
  std::vector<cplx> acc(8, 0.0);
  for (int i = 0; i < M; ++i) {
    double x = -pi + 2 * pi * i / M;
    auto a = s_transform_table(c, c.T - t, x), b = s_transform_table(c, t, -x);
    for (int k = 0; k < 8; ++k) acc[k] += a.value[k] * b.value[k];
  }
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(acc[k] * (2 * pi / M) * (8.0 / (2 * pi)) - 1.0), 0.0, 1e-8) << k;
  EXPECT_THROW(s_transform_table(c, 0.0, 0.1), domain_error);
}

TEST(CorrKernel, TraceAndReproducing) {
  for (double T : {5.0, 16.0}) {
    auto c = correlation_context(8, T, 0.5);
    int M = 4 * static_cast<int>(c.lm.size()) + 16;
    double t = 0.4 * T, trace = 0.0, x = 0.3, y = -1.1;
    cplx rep = 0.0;
    for (int i = 0; i < M; ++i) {
      double z = -pi + 2 * pi * i / M;
      trace += corr_kernel(c, t, t, z, z).tilde.real();
      rep += corr_kernel(c, t, t, x, z).tilde * corr_kernel(c, t, t, z, y).tilde;
    }
    EXPECT_NEAR(trace * 2 * pi / M, 8.0, 1e-6) << T;
    EXPECT_LE(std::abs(rep * (2 * pi / M) - corr_kernel(c, t, t, x, y).tilde), 1e-6) << T;
  }
}

TEST(CorrKernel, DensityPositiveAndTauPeriodic) {
  for (int n : {7, 8}) {
    auto c = correlation_context(n, 12.0, half_parity(n));
    for (double d : density_grid(c, 4.0, 64)) EXPECT_GE(d, -1e-8);
    auto c1 = correlation_context(n, 12.0, half_parity(n) + 1.0);
    for (double x : {-2.0, 0.5, 3.0}) {
      auto a = corr_kernel(c, 3.0, 7.0, x, 0.4), b = corr_kernel(c1, 3.0, 7.0, x, 0.4);
      EXPECT_LE(std::abs(a.value - b.value), 1e-12);
    }
  }
}

TEST(CorrKernel, TwoPointFunctionSymmetric) {
  auto c = correlation_context(2, 8.0, 0.5);
  double t = 3.0, x = 0.7, y = -2.2;
  auto det = [&](double u, double v) {
    return corr_kernel(c, t, t, u, u).value * corr_kernel(c, t, t, v, v).value -
           corr_kernel(c, t, t, u, v).value * corr_kernel(c, t, t, v, u).value;
  };
  EXPECT_LE(std::abs(det(x, y) - det(y, x)), 1e-8);
  EXPECT_GE(det(x, y).real(), -1e-12);
}

TEST(CorrKernel, WCircOnlyForLaterTimes) {
  auto c = correlation_context(6, 12.0, 0.5);
  EXPECT_EQ(corr_kernel(c, 5.0, 4.0, 0.1, 0.2).w_circ, cplx(0.0));
  EXPECT_EQ(corr_kernel(c, 5.0, 5.0, 0.1, 0.2).w_circ, cplx(0.0));
  auto v = corr_kernel(c, 4.0, 5.0, 0.1, 0.2);
  EXPECT_LE(std::abs(v.w_circ - heat_kernel(0.1, 0.2, 1.0, 0.5, 6)), 1e-15);
  EXPECT_THROW(corr_kernel(c, 0.0, 5.0, 0.1, 0.2), domain_error);
  EXPECT_THROW(corr_kernel(c, 4.0, 12.0, 0.1, 0.2), domain_error);
}

TEST(CorrKernel, WCircGaussianUnderCuspScaling) {
  auto pd = phase_data(16.0);
  double d = pearcey_d(pd);
  int n = 200;
  double jac = d * std::pow(n, -0.75);
  for (double dtau : {0.3, 1.0})
    for (double xi : {0.0, 0.5}) {
      double eta = -0.4;
      double ti = pd.t_c, tj = pd.t_c + d * d / std::sqrt(double(n)) * dtau;
      cplx w = w_circ(ti, tj, -pi - jac * xi, -pi - jac * eta, 0.5, n) * jac;
      double g = std::exp(-(eta - xi) * (eta - xi) / (2 * dtau)) / std::sqrt(2 * pi * dtau);
      EXPECT_LE(std::abs(w - g) / g, 0.05);
    }
}

TEST(CorrKernel, MultiprecisionMatchesDouble) {
  auto a = correlation_context(12, 12.0, 0.5);
  auto b = correlation_context<mpfr_real>(12, 12.0, 0.5, 40);
  auto u = corr_kernel(a, 5.0, 6.0, 0.4, -0.3), v = corr_kernel(b, 5.0, 6.0, 0.4, -0.3);
  EXPECT_LE(std::abs(u.value - v.value), 1e-11);
}

TEST(Probes, PearceyTrendAndTauIndependence) {
  auto r = pearcey_probe({100, 200}, 16.0);
  EXPECT_LT(r[1].error, r[0].error);
  EXPECT_LE(r[1].error, 0.1);
  ProbeArgs a;
  a.half_parity_tau = false;
  a.tau = 0.3;
  auto s = pearcey_probe({200}, 16.0, a);
  EXPECT_LE(std::abs(s[0].value - r[1].value), s[0].error + r[1].error);
  auto pd = phase_data(16.0);
  unsigned digits = 0;
  auto hi = detail::adaptive_kernel(200, 16.0, 0.5, pd.t_c, pd.t_c, -pi, -pi, digits);
  auto more = detail::kernel_with_digits<mpfr_real>(200, 16.0, 0.5, pd.t_c, pd.t_c, -pi, -pi, digits + 60);
  EXPECT_LE(std::abs(hi.value - more.value), 1e-12 * std::abs(more.value));
  EXPECT_THROW(pearcey_probe({100}, 9.0), regime_error);
}

TEST(Probes, TacnodeTrend) {
  auto hm = hastings_mcleod();
  auto r = tacnode_probe({64, 128}, 0.0, hm);
  EXPECT_LT(r[1].error, r[0].error);
  EXPECT_NEAR(tacnode_T(64, 0.0), pi * pi, 1e-15);
}
