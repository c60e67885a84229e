#include <gtest/gtest.h>

#include "nibm/painleve.hpp"
#include "nibm/rh_asymptotics.hpp"
#include "nibm/winding.hpp"

using namespace nibm;

TEST(Winding, Subcritical) {
  auto wd = winding_distribution(30, 5.0, 3);
  EXPECT_GE(wd.prob(0), 1.0 - 1e-6);
  EXPECT_LE(wd.residual, 1e-8);
}

TEST(Winding, SupercriticalDiscreteNormal) {
  auto wd = winding_distribution(40, 16.0, 5);
  auto dn = discrete_normal(16.0);
  for (int w = -2; w <= 2; ++w) EXPECT_LE(std::abs(wd.prob(w) - dn.prob(w)), 0.05) << w;
  EXPECT_LE(wd.residual, 1e-8);
  for (int w = 1; w <= 5; ++w) EXPECT_NEAR(wd.prob(w), wd.prob(-w), 1e-9);
  for (double p : wd.probs) EXPECT_GE(p, 0.0);
  double c1 = -std::log(wd.prob(1) / wd.prob(0));
  for (int w = 2; w <= 3; ++w) {
    double cw = -std::log(wd.prob(w) / wd.prob(0)) / (w * w);
    EXPECT_NEAR(cw / c1, 1.0, 0.02) << w;
  }
  EXPECT_NEAR(c1 / -std::log(dn.q), 1.0, 0.05);
}

TEST(Winding, Critical) {
  auto hm = hastings_mcleod();
  int n = 64;
  auto wd = winding_distribution(n, T_of_sigma(n, 0.0), 3);
  EXPECT_LE(std::abs(wd.prob(1) - winding_critical_p1(n, hm(0.0))), 2.0 / n);
  EXPECT_LE(std::abs(wd.prob(-1) - winding_critical_p1(n, hm(0.0))), 2.0 / n);
  EXPECT_LE(std::abs(wd.prob(0) - winding_critical_p0(n, hm(0.0))), 2.0 / n);
  EXPECT_LE(wd.residual, 1e-8);
}

TEST(Winding, QuadratureDoubling) {
  auto a = winding_distribution(20, 12.0, 3, 64), b = winding_distribution(20, 12.0, 3, 128);
  for (int w = -3; w <= 3; ++w) EXPECT_NEAR(a.prob(w), b.prob(w), 1e-9);
  EXPECT_THROW(winding_distribution(20, 12.0, 10, 32), domain_error);
}

TEST(DiscreteNormal, NormalizationAndLimits) {
  auto dn = discrete_normal(16.0);
  double s = 0.0;
  for (int w = -20; w <= 20; ++w) s += dn.prob(w);
  EXPECT_NEAR(s, 1.0, 1e-12);
  double prev = 0.0;
  for (double T : {12.0, 20.0, 40.0, 60.0, 80.0}) {
    auto d = discrete_normal(T);
    double r = d.prob(1) / d.prob(0);
    EXPECT_GT(r, prev);
    EXPECT_LT(r, 1.0);
    prev = r;
  }
  EXPECT_GE(discrete_normal(T_crit + 0.01).prob(0), 0.97);
  EXPECT_GE(discrete_normal(T_crit + 1e-5).prob(0), 1.0 - 1e-3);
  double d = 1e-6;
  EXPECT_NEAR((1.0 - discrete_normal(T_crit + d).prob(0)) / std::sqrt(d), std::sqrt(2.0) / (2 * pi), 1e-3);
  EXPECT_THROW(discrete_normal(5.0), regime_error);
}

TEST(HankelOde, MatchesDirect) {
  EXPECT_EQ(log_hankel_via_ode(12, 12.0, 0.0), 0.0);
  for (int n : {12, 13, 30})
    for (double T : {8.0, 12.0}) {
      double e = half_parity(n), tau = 0.37;
      double direct = hankel_log(n, T, tau - e) - hankel_log(n, T, e);
      EXPECT_LE(std::abs(log_hankel_via_ode(n, T, tau) - direct), 1e-5 * std::abs(direct)) << n << " " << T;
    }
  for (int n : {12, 13}) {
    double e = half_parity(n), h = 1e-4;
    EXPECT_LE(std::abs(hankel_log(n, 12.0, e + h) - hankel_log(n, 12.0, e - h)) / (2 * h), 1e-6);
  }
}
