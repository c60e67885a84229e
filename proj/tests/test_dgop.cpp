#include <gtest/gtest.h>

#include <boost/multiprecision/mpfr.hpp>

#include "nibm/dgop.hpp"
#include "nibm/rh_asymptotics.hpp"

using namespace nibm;
using mp = boost::multiprecision::mpfr_float;

TEST(Lattice, NodesAndWeights) {
  auto a = build_lattice(10, 0.0, 4.0);
  auto b = build_lattice(10, 0.5, 4.0);
  bool has_zero = false;
  for (double x : a.nodes) has_zero |= x == 0.0;
  EXPECT_TRUE(has_zero);
  for (double x : b.nodes) EXPECT_NE(x, 0.0);
  for (const auto* lm : {&a, &b}) {
    ASSERT_EQ(lm->size() % 2, lm == &a ? 1u : 0u);
    for (std::size_t i = 0; i < lm->size(); ++i) {
      EXPECT_NEAR(lm->nodes[i], -lm->nodes[lm->size() - 1 - i], 1e-15);
      if (i) {
        EXPECT_NEAR(lm->nodes[i] - lm->nodes[i - 1], 0.1, 1e-14);
      }
      EXPECT_LE(std::abs(lm->nodes[i]), lm->x_max);
    }
    EXPECT_LE(lm->tail_bound, 1e-30);
    EXPECT_GE(lm->x_max, 3.0 * support_edge(4.0));
    EXPECT_LE(std::exp(-0.5 * 4.0 * 10 * lm->x_max * lm->x_max), 1e-32);
  }
  auto c = build_lattice(10, 1.3, 4.0), d = build_lattice(10, 0.3, 4.0);
  ASSERT_EQ(c.size(), d.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.nodes[i], d.nodes[i], 1e-15);
}

TEST(Lattice, PoissonSummation) {
  auto lm = build_lattice(40, 0.0, 4.0);
  double h0 = 0.0;
  for (double w : lm.weights) h0 += w / 40;
  EXPECT_NEAR(h0 / std::sqrt(2 * pi / (4.0 * 40)), 1.0, 1e-6);
}

TEST(Stieltjes, OrthogonalityAcrossRegimes) {
  for (double T : {4.0, T_crit, 16.0})
    for (double tau : {0.0, 0.25, 0.5})
      for (int n : {20, 100}) {
        auto lm = build_lattice(n, tau, T);
        auto rt = stieltjes(lm, n);
        double worst = 0.0;
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < lm.size(); ++r) s += rt.q[i][r] * rt.q[j][r];
            worst = std::max(worst, std::abs(s));
          }
        EXPECT_LE(worst, 1e-8) << T << " " << tau << " " << n;
        for (int j = 0; j <= n; ++j) {
          EXPECT_TRUE(std::isfinite(rt.log_h[j]));
          if (j) {
            EXPECT_NEAR(rt.gamma_sq[j], std::exp(rt.log_h[j] - rt.log_h[j - 1]), 1e-13 * rt.gamma_sq[j]);
          }
          if (tau == 0.0 || tau == 0.5) {
            EXPECT_LE(std::abs(rt.beta[j]), 1e-10);
          }
        }
      }
}

TEST(Stieltjes, ReconstructedPolynomialsOrthogonal) {
  int n = 30;
  auto lm = build_lattice(n, 0.3, 12.0);
  auto rt = stieltjes(lm, n);
  std::vector<std::vector<double>> p(n + 1, std::vector<double>(lm.size()));
  for (int k = 0; k <= n; ++k)
    for (std::size_t i = 0; i < lm.size(); ++i) p[k][i] = eval_poly(rt, k, lm.nodes[i]).value().real();
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < lm.size(); ++r) s += p[i][r] * p[j][r] * lm.weights[r] / n;
      EXPECT_LE(std::abs(s) / std::exp(0.5 * (rt.log_h[i] + rt.log_h[j])), 1e-8) << i << " " << j;
    }
}

TEST(Stieltjes, RankError) {
  auto lm = build_lattice(4, 0.0, 4.0);
  EXPECT_THROW(stieltjes(lm, static_cast<int>(lm.size())), rank_error);
}

TEST(Stieltjes, ShiftByOneGivesSameTable) {
  auto a = stieltjes(build_lattice(20, 0.3, 10.0), 20), b = stieltjes(build_lattice(20, 1.3, 10.0), 20);
  for (int j = 0; j <= 20; ++j) {
    EXPECT_NEAR(a.log_h[j], b.log_h[j], 1e-13 * std::max(1.0, std::abs(a.log_h[j])));
    EXPECT_NEAR(a.beta[j], b.beta[j], 1e-13);
  }
}

TEST(Stieltjes, GammaMainTerms) {
  EXPECT_NEAR(gamma_sq_nn(20, 5.0, 0.0), 0.2, 1e-6);
  EXPECT_NEAR(gamma_sq_nn(40, 5.0, 0.0), 0.2, 1e-8);
  EXPECT_NEAR(gamma_sq_nn(20, 16.0, 0.0), gamma_sq_supercritical(20, 16.0, 0.0), 0.05);
}

TEST(Stieltjes, MultiprecisionAgreesWithDouble) {
  mp::default_precision(40);
  auto a = stieltjes(build_lattice(30, 0.2, 16.0), 30);
  auto b = stieltjes(build_lattice<mp>(30, 0.2, 16.0), 30);
  for (int j = 0; j <= 30; ++j) {
    EXPECT_NEAR(a.log_h[j], static_cast<double>(b.log_h[j]), 1e-11 * std::max(1.0, std::abs(a.log_h[j])));
    EXPECT_NEAR(a.beta[j], static_cast<double>(b.beta[j]), 1e-12);
  }
}

TEST(Hankel, Symmetries) {
  double a = hankel_log(8, 10.0, 0.3), b = hankel_log(8, 10.0, 1.3), c = hankel_log(8, 10.0, -0.3);
  EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
  EXPECT_NEAR(a, c, 1e-12 * std::abs(a));
}

TEST(Hankel, DeformationEquation) {
  mp::default_precision(50);
  double d = 1e-3;
  for (int n : {12, 20})
    for (double T : {5.0, 12.0})
      for (double tau : {0.2, 0.37}) {
        mp f[5];
        for (int i = -2; i <= 2; ++i) f[i + 2] = hankel_log<mp>(n, T, tau + i * d);
        mp d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * d * d);
        mp rhs = T * T * gamma_sq_nn<mp>(n, T, tau) - T;
        EXPECT_LE(static_cast<double>(abs(d2 - rhs) / abs(rhs)), 1e-4) << n << " " << T << " " << tau;
      }
}

TEST(Polynomials, BaseCasesAndMonic) {
  auto rt = stieltjes(build_lattice(20, 0.3, 12.0), 12);
  EXPECT_EQ(eval_poly(rt, 0, cplx(0.7, 0.2)).value(), cplx(1.0));
  cplx z(0.4, -0.1);
  EXPECT_NEAR(std::abs(eval_poly(rt, 1, z).value() - (z - rt.beta[0])), 0.0, 1e-15);
  int k = 7;
  double s = 1.0;
  std::vector<double> x(k + 1);
  for (int i = 0; i <= k; ++i) x[i] = s * (i - k / 2.0);
  std::vector<double> dd(k + 1);
  for (int i = 0; i <= k; ++i) dd[i] = eval_poly(rt, k, x[i]).value().real();
  for (int lvl = 1; lvl <= k; ++lvl)
    for (int i = k; i >= lvl; --i) dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - lvl]);
  EXPECT_NEAR(dd[k], 1.0, 1e-10);
}

TEST(Polynomials, MantissaStaysBounded) {
  auto rt = stieltjes(build_lattice(500, 0.0, 16.0), 500, false);
  auto p = eval_poly(rt, 500, cplx(3.0, 1.0));
  EXPECT_LE(std::abs(p.mant), 1e2);
  EXPECT_GE(std::abs(p.mant), 1e-2);
  EXPECT_TRUE(std::isfinite(p.log_scale));
}

TEST(Polynomials, SupercriticalAsymptotics) {
  int n = 60;
  double T = 16.0, tau = 0.3;
  auto pd = phase_data(T);
  auto rt = stieltjes(build_lattice(n, tau, T), n);
  cplx z(0.9 * pd.beta, 0.3);
  auto M = model_entries(z, make_model(n, T, tau));
  cplx lhs = std::exp(eval_poly(rt, n, z).log_value() - static_cast<double>(n) * g_value(z, pd));
  EXPECT_LE(std::abs(lhs - M.m11) / std::abs(M.m11), 10.0 / n);
}

TEST(Cauchy, LargeZAndPoles) {
  auto lm = build_lattice(20, 0.3, 12.0);
  auto rt = stieltjes(lm, 20);
  cplx c = cauchy_transform(lm, rt, 0, 100.0).value();
  EXPECT_NEAR(std::abs(c * 100.0 / std::exp(rt.log_h[0]) - 1.0), 0.0, 1e-2);
  EXPECT_THROW(cauchy_transform(lm, rt, 0, lm.nodes[5]), domain_error);
}

TEST(Cauchy, SupercriticalAsymptotics) {
  mp::default_precision(60);
  int n = 60;
  double T = 16.0, tau = 0.3;
  auto pd = phase_data(T);
  auto lm = build_lattice<mp>(n, tau, T);
  auto rt = stieltjes(lm, n);
  cplx z(0.9 * pd.beta, 0.3);
  auto M = model_entries(z, make_model(n, T, tau));
  cplx lhs =
      std::exp(cauchy_transform(lm, rt, n, z).log_value() + static_cast<double>(n) * (g_value(z, pd) - pd.lagrange_l));
  EXPECT_LE(std::abs(lhs - M.m12) / std::abs(M.m12), 10.0 / n);
}

TEST(ChristoffelDarboux, MatchesDirectSum) {
  int n = 8;
  auto rt = stieltjes(build_lattice(20, 0.3, 12.0), 12);
  cplx z(0.3, 0.2), w(-0.5, 0.1);
  cplx direct = 0.0;
  for (int k = 0; k < n; ++k)
    direct += eval_poly(rt, k, z).value() * eval_poly(rt, k, w).value() / std::exp(rt.log_h[k]);
  cplx cd = cd_kernel(rt, n, z, w).value();
  EXPECT_LE(std::abs(cd - direct) / std::abs(direct), 1e-9);
  EXPECT_LE(std::abs(cd - cd_kernel(rt, n, w, z).value()) / std::abs(cd), 1e-12);
  double x = 0.35;
  double diag = 0.0;
  for (int k = 0; k < n; ++k) diag += std::pow(eval_poly(rt, k, x).value().real(), 2) / std::exp(rt.log_h[k]);
  cplx conf = cd_kernel(rt, n, x, x).value();
  EXPECT_GT(conf.real(), 0.0);
  EXPECT_NEAR(conf.real() / diag, 1.0, 1e-9);
}
