#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nibm/phase.hpp"

using namespace nibm;

TEST(Phase, RoundtripTtoK) {
  for (double T : {10.0, 12.0, 16.0, 30.0, 60.0}) {
    double k = solve_k_from_T(T);
    EXPECT_NEAR(T_of_k(k) / T, 1.0, 1e-12) << T;
    auto c = complete_elliptic(ktilde(k), (1 - k) / (1 + k));
    EXPECT_NEAR(4 * c.K * c.E / T, 1.0, 1e-10) << T;
  }
  EXPECT_THROW(solve_k_from_T(T_crit), regime_error);
  EXPECT_THROW(solve_k_from_T(5.0), regime_error);
}

TEST(Phase, ParametrizationLimitsAndMonotone) {
  EXPECT_LT(solve_k_from_T(T_crit * (1 + 1e-8)), 1e-3);
  EXPECT_GT(solve_k_from_T(100.0), 0.999);
  double prev = T_crit;
  for (int i = 1; i < 200; ++i) {
    double T = T_of_k(i / 200.0);
    EXPECT_GT(T, prev);
    prev = T;
  }
  EXPECT_NEAR(T_of_k(1e-9), T_crit, 1e-6);
}

TEST(Phase, FrozenValues) {
  // computed independently with mpmath (50 digits)
  auto p = phase_data(16.0);
  EXPECT_NEAR(p.k, 0.8577, 1e-4);
  EXPECT_NEAR(p.alpha, 0.4571, 1e-4);
  EXPECT_NEAR(p.beta, 0.5329, 1e-4);
  EXPECT_NEAR(p.t_c, 4.0113, 1e-4);
  auto p10 = phase_data(10.0);
  EXPECT_NEAR(p10.k, 0.1616, 1e-4);
  EXPECT_NEAR(p10.t_c, 4.595, 1e-3);
  auto p12 = phase_data(12.0);
  EXPECT_NEAR(p12.k, 0.5983, 1e-4);
  EXPECT_NEAR(p12.t_c, 4.106, 1e-3);
}

TEST(Phase, Subcritical) {
  auto p = phase_data(5.0);
  EXPECT_EQ(p.regime, Regime::subcritical);
  EXPECT_NEAR(p.beta, 2 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(std::exp(p.lagrange_l), 1 / (5.0 * std::exp(1.0)), 1e-15);
  EXPECT_EQ(phase_data(9.8696044).regime, Regime::subcritical);
  EXPECT_NEAR(rho_T(0.0, phase_data(4.0)), 2 / pi, 1e-15);
}

TEST(Phase, SupercriticalRecord) {
  for (double T : {10.0, 12.0, 16.0, 30.0}) {
    auto p = phase_data(T);
    EXPECT_EQ(p.regime, Regime::supercritical);
    EXPECT_NEAR(p.alpha, p.k * p.beta, 1e-15);
    EXPECT_LT(p.alpha, p.beta);
    EXPECT_NEAR(4 * p.Kt * p.Et / T, 1.0, 1e-10);
    EXPECT_NEAR(p.t_c, t_c_tilde(p), 1e-10);
    EXPECT_NEAR(p.t_c, T / 2 - 2 / p.alpha * (p.K - p.E), 1e-10);
    EXPECT_NEAR(p.beta, 1 / ((1 + p.k) * p.Et), 1e-12);
    EXPECT_LT(p.t_c, T / 2);
  }
  EXPECT_NEAR(phase_data(T_crit * (1 + 1e-8)).t_c, T_crit / 2, 1e-3);
  EXPECT_NEAR(phase_data(T_crit * (1 + 1e-6)).t_c, 4.931317700411897, 1e-8);
}

TEST(Phase, DensityNormalized) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double T : {2.0, 5.0, 8.0, 9.5, 10.0, 11.0, 12.0, 16.0, 20.0, 30.0}) {
    auto p = phase_data(T);
    double total;
    if (p.regime == Regime::supercritical)
      total = 2 * (p.alpha + ts.integrate([&](double x) { return rho_T(x, p); }, p.alpha, p.beta));
    else
      total = ts.integrate([&](double x) { return rho_T(x, p); }, -p.beta, p.beta);
    EXPECT_NEAR(total, 1.0, 1e-8) << T;
  }
}

TEST(Phase, DensityForms) {
  auto p = phase_data(16.0);
  EXPECT_EQ(rho_T(0.3 * p.alpha, p), 1.0);
  EXPECT_EQ(rho_T(p.alpha, p), 1.0);
  EXPECT_EQ(rho_T(-1.1 * p.beta, p), 0.0);
  for (int i = 1; i < 20; ++i) {
    double x = p.alpha + (p.beta - p.alpha) * i / 20.0;
    double r = rho_T(x, p);
    EXPECT_NEAR(r, rho_T_integral(x, p), 1e-9);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
    EXPECT_EQ(r, rho_T(-x, p));
  }
}

TEST(Phase, EdgeExponents) {
  auto p = phase_data(16.0);
  auto slope = [](auto f, double d1, double d2) { return std::log(f(d2) / f(d1)) / std::log(d2 / d1); };
  double sb = slope([&](double d) { return rho_T(p.beta - d, p); }, 1e-8, 1e-7);
  double sa = slope([&](double d) { return 1 - rho_T(p.alpha + d, p); }, 1e-8, 1e-7);
  EXPECT_NEAR(sb, 0.5, 0.02);
  EXPECT_NEAR(sa, 0.5, 0.02);
}

TEST(GFunction, PrimeAtInfinityAndJumps) {
  auto p = phase_data(16.0);
  EXPECT_NEAR(std::abs(cplx(50.0) * g_prime(50.0, p) - 1.0), 0.0, 3e-3);
  double x = 0.5 * (p.alpha + p.beta);
  cplx s = g_prime(x, p, Side::upper) + g_prime(x, p, Side::lower);
  EXPECT_NEAR(std::abs(s - p.T * x), 0.0, 1e-9);
  cplx d = g_prime(p.alpha / 2, p, Side::upper) - g_prime(p.alpha / 2, p, Side::lower);
  EXPECT_NEAR(std::abs(d - cplx(0, -2 * pi)), 0.0, 1e-9);
  EXPECT_THROW(g_prime(0.1, p), domain_error);
}

TEST(GFunction, TwoRepresentationsAgree) {
  auto p = phase_data(16.0);
  for (cplx z : {cplx(0.8, 0.0), cplx(0.3, 0.2), cplx(-0.4, 0.5), cplx(0.2, -0.3), cplx(2.0, 1.0), cplx(-1.0, -0.1)})
    EXPECT_NEAR(std::abs(g_prime(z, p) - g_prime_alt(z, p)), 0.0, 1e-10) << z;
}

TEST(GFunction, ValueNormalizationAndDerivative) {
  auto p5 = phase_data(5.0), p16 = phase_data(16.0);
  EXPECT_NEAR(std::abs(g_value(100.0, p5) - std::log(100.0)), 0.0, 1e-3);
  for (const auto* p : {&p5, &p16}) {
    for (cplx z : {cplx(1e3, 0), cplx(0, 1e3), cplx(-1e3, 1), cplx(-1e3, -1)})
      EXPECT_NEAR(std::abs(g_value(z, *p) - std::log(z)), 0.0, 1e-5) << z;
    double h = 1e-5;
    for (cplx z : {cplx(0.3, 0.4), cplx(-0.6, 0.1), cplx(0.1, -0.2), cplx(1.2, 0)}) {
      cplx fd = (g_value(z + h, *p) - g_value(z - h, *p)) / (2 * h);
      cplx gp = g_prime(z, *p);
      EXPECT_NEAR(std::abs(fd - gp) / std::abs(gp), 0.0, 1e-6) << z;
    }
  }
}

TEST(GFunction, VariationalConditions) {
  for (double T : {5.0, 12.0, 16.0}) {
    auto p = phase_data(T);
    double lo = p.regime == Regime::supercritical ? p.alpha : 0.0;
    for (int i = 1; i < 20; ++i) {
      double x = lo + (p.beta - lo) * i / 20.0;
      EXPECT_NEAR(variational_residual(x, p), 0.0, 1e-8) << T << " " << x;
    }
    for (int i = 1; i <= 20; ++i) EXPECT_LT(variational_residual(p.beta * (1 + 0.1 * i), p), 0.0);
    if (p.regime == Regime::supercritical)
      for (int i = 0; i < 20; ++i) {
        EXPECT_GT(variational_residual(p.alpha * i / 20.0, p), 0.0);
      }
  }
  auto p = phase_data(16.0);
  EXPECT_LT(2 * g_value(p.beta + 0.5, p).real() - p.T * std::pow(p.beta + 0.5, 2) / 2 - p.lagrange_l, 0.0);
}

TEST(PearceyScale, PositiveOnGrid) {
  for (int i = 0; i <= 18; ++i) {
    double k = 0.05 + 0.05 * i;
    auto p = phase_data(T_of_k(k));
    EXPECT_GT(g4_at_zero(p), 0.0);
  }
  EXPECT_NEAR(tacnode_d(), std::pow(2.0, -5.0 / 3.0) * pi, 1e-15);
  EXPECT_THROW(pearcey_d(phase_data(5.0)), regime_error);
}

TEST(PearceyScale, FourthDifferenceOracle) {
  auto p = phase_data(16.0);
  // continuation of g' across (-alpha, alpha) equals the upper boundary value there
  auto gp = [&](double x) { return g_prime(x, p, Side::upper).real(); };
  double h = 0.02 * p.alpha;
  double d3 = (gp(2 * h) - 2 * gp(h) + 2 * gp(-h) - gp(-2 * h)) / (2 * h * h * h);
  double h2 = h / 2;
  double d3b = (gp(2 * h2) - 2 * gp(h2) + 2 * gp(-h2) - gp(-2 * h2)) / (2 * h2 * h2 * h2);
  double rich = (4 * d3b - d3) / 3;
  EXPECT_NEAR(rich / g4_at_zero(p), 1.0, 1e-4);
  double d = std::pow(rich / 6, 0.25);
  EXPECT_NEAR(d / pearcey_d(p), 1.0, 1e-4);
}
