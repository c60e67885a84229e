#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "nibm/airy_tacnode.hpp"
#include "nibm/dgop.hpp"
#include "nibm/finite_kernel.hpp"
#include "nibm/limit_kernels.hpp"
#include "nibm/painleve.hpp"
#include "nibm/phase.hpp"
#include "nibm/rh_asymptotics.hpp"
#include "nibm/special_fn.hpp"
#include "nibm/walker_oracle.hpp"
#include "nibm/winding.hpp"

namespace nibm::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

struct Check {
  bool ok = true;
  std::ostringstream msg;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      msg << "FAILED " << what << "; ";
    }
  }
  template <class T>
  void note(const std::string& key, T v) {
    msg << key << "=" << v << " ";
  }
};

inline const HMSolution& hm() {
  static const HMSolution s = hastings_mcleod(8.0, 4000);
  return s;
}

inline void legendre(Check& c) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double k = std::pow(10.0, -4.0 + 4.0 * i / 49.0) * 0.9999;
    auto a = complete_elliptic(k), b = complete_elliptic(kprime(k));
    worst = std::max(worst, std::abs(a.K * b.E + b.K * a.E - a.K * b.K - pi / 2));
  }
  c.note("max_err", worst);
  c.expect(worst <= 1e-12, "Legendre relation to 1e-12");
}

inline void parametrization(Check& c) {
  double worst = 0.0;
  for (double T : {10.0, 12.0, 16.0, 30.0}) {
    double k = solve_k_from_T(T);
    auto e = complete_elliptic(ktilde(k), (1 - k) / (1 + k));
    worst = std::max(worst, std::abs(4 * e.K * e.E / T - 1.0));
  }
  c.note("max_rel_err", worst);
  c.expect(worst <= 1e-10, "T -> k -> 4 K~ E~ roundtrip");
}

inline void equilibrium(Check& c) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst = 0.0;
  bool range = true;
  for (double T : {5.0, 9.0, 10.0, 12.0, 16.0, 30.0}) {
    auto p = phase_data(T);
    double total = p.regime == Regime::supercritical
                       ? 2 * (p.alpha + ts.integrate([&](double x) { return rho_T(x, p); }, p.alpha, p.beta))
                       : ts.integrate([&](double x) { return rho_T(x, p); }, -p.beta, p.beta);
    worst = std::max(worst, std::abs(total - 1.0));
    for (int i = 0; i <= 200; ++i) {
      double r = rho_T(-1.2 * p.beta + 2.4 * p.beta * i / 200, p);
      range = range && r >= 0.0 && r <= 1.0;
    }
  }
  c.note("max_mass_err", worst);
  c.expect(worst <= 1e-8, "total mass 1 +- 1e-8");
  c.expect(range, "density within [0, 1]");
  auto p = phase_data(16.0);
  auto slope = [](auto f, double d1, double d2) { return std::log(f(d2) / f(d1)) / std::log(d2 / d1); };
  double sb = slope([&](double d) { return rho_T(p.beta - d, p); }, 1e-8, 1e-7);
  double sa = slope([&](double d) { return 1 - rho_T(p.alpha + d, p); }, 1e-8, 1e-7);
  c.note("exp_beta", sb);
  c.note("exp_alpha", sa);
  c.expect(std::abs(sb - 0.5) <= 0.02 && std::abs(sa - 0.5) <= 0.02, "square-root edge exponents");
}

inline void variational(Check& c) {
  auto p = phase_data(16.0);
  double eq = 0.0;
  bool signs = true;
  for (int i = 1; i < 20; ++i) eq = std::max(eq, std::abs(variational_residual(p.alpha + (p.beta - p.alpha) * i / 20.0, p)));
  for (int i = 0; i < 20; ++i) signs = signs && variational_residual(p.alpha * i / 20.0, p) > 0.0;
  for (int i = 1; i <= 20; ++i) signs = signs && variational_residual(p.beta * (1 + 0.1 * i), p) < 0.0;
  c.note("max_eq_residual", eq);
  c.expect(eq <= 1e-8, "equality on (alpha, beta)");
  c.expect(signs, "strict signs on [0, alpha) and (beta, inf)");
}

inline void deformation(Check& c) {
  using mp = boost::multiprecision::mpfr_float;
  mp::default_precision(50);
  double worst = 0.0, d = 1e-3;
  for (int n : {12, 20})
    for (double T : {5.0, 12.0})
      for (double tau : {0.2, 0.37}) {
        mp f[5];
        for (int i = -2; i <= 2; ++i) f[i + 2] = hankel_log<mp>(n, T, tau + i * d);
        mp d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * d * d);
        mp rhs = T * T * gamma_sq_nn<mp>(n, T, tau) - T;
        worst = std::max(worst, static_cast<double>(abs(d2 - rhs) / abs(rhs)));
      }
  c.note("max_rel_err", worst);
  c.expect(worst <= 1e-4, "d^2/dtau^2 log H = T^2 gamma^2 - T");
}

inline void winding(Check& c) {
  auto sub = winding_distribution(30, 5.0, 3);
  c.note("sub_P0", sub.prob(0));
  c.expect(sub.prob(0) >= 1.0 - 1e-6, "subcritical P(0)");
  auto sup = winding_distribution(40, 16.0, 5);
  auto dn = discrete_normal(16.0);
  double e = 0.0;
  for (int w = -2; w <= 2; ++w) e = std::max(e, std::abs(sup.prob(w) - dn.prob(w)));
  c.note("super_err", e);
  c.note("super_residual", sup.residual);
  c.expect(e <= 0.05, "supercritical discrete normal");
  c.expect(sup.residual <= 1e-8, "supercritical total mass");
  int n = 64;
  auto cr = winding_distribution(n, T_of_sigma(n, 0.0), 3);
  double p1 = winding_critical_p1(n, hm()(0.0));
  double ec = std::max(std::abs(cr.prob(1) - p1), std::abs(cr.prob(-1) - p1));
  c.note("crit_err", ec);
  c.expect(ec <= 2.0 / n, "critical P(+-1)");
}

inline void recurrence(Check& c) {
  double es = std::abs(gamma_sq_nn(40, 5.0, 0.0) - gamma_sq_subcritical(5.0));
  c.note("sub_err", es);
  c.expect(es <= 1e-8, "subcritical gamma^2");
  for (double tau : {0.0, 0.3}) {
    double e40 = std::abs(gamma_sq_nn(40, 16.0, tau) - gamma_sq_supercritical(40, 16.0, tau));
    double e80 = std::abs(gamma_sq_nn(80, 16.0, tau) - gamma_sq_supercritical(80, 16.0, tau));
    c.note("super_err40", e40);
    c.note("super_err80", e80);
    c.expect(e40 <= 10.0 / 40 && e80 <= 10.0 / 80, "supercritical gamma^2 within 10/n");
    c.expect(std::log2(e40 / e80) >= 0.7, "supercritical halving trend");
  }
  int n = 64;
  double T = T_of_sigma(n, 0.0), ec = 0.0;
  for (double tau : {half_parity(n), 0.3})
    ec = std::max(ec, std::abs(gamma_sq_nn(n, T, tau) - gamma_sq_critical(n, T, tau, hm()(0.0))));
  c.note("crit_err", ec);
  c.expect(ec <= 5.0 / n, "critical gamma^2 within 5/n");
}

inline void hastings(Check& c) {
  const auto& h = hm();
  double worst = 0.0;
  for (double s = -7.0; s <= 7.0; s += 0.0137) {
    auto v = h.eval(s);
    worst = std::max(worst, std::abs(v[2] - s * v[0] - 2 * v[0] * v[0] * v[0]));
  }
  auto fine = hastings_mcleod(10.0, 10000);
  c.note("residual", std::max(worst, h.residual));
  c.note("q0", h(0.0));
  c.expect(std::max(worst, h.residual) <= 1e-8, "PII residual");
  c.expect(std::abs(h(8.0) / airy(8.0).ai - 1.0) <= 1e-6, "q(8)/Ai(8)");
  c.expect(std::abs(fine(0.0) - h(0.0)) <= 1e-8, "q(0) under grid doubling");
  c.expect(std::abs(h(0.0) - 0.36706155) <= 1e-6, "q(0) oracle value");
}

inline void lax(Check& c) {
  const auto& h = hm();
  double det = 0.0, sym = 0.0;
  for (int i = 0; i < 20; ++i) {
    cplx z = std::polar(0.3 + 0.1 * i, 0.3 + 2.9 * i / 19.0);
    double s = -2.0 + 0.2 * i;
    Mat2c A = psi_solve(z, s, h), B = psi_solve(-z, s, h);
    double scale = std::max(1.0, A.cwiseAbs2().maxCoeff());
    det = std::max(det, std::abs(A.determinant() - 1.0) / scale);
    double sc = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) sym = std::max(sym, std::abs(B(a, b) - A(1 - a, 1 - b)) / sc);
  }
  double ds = 0.0, hh = 1e-3;
  for (cplx z : {cplx(0.7, 0.7), cplx(-1.2, 0.3)}) {
    double s = 0.5, q = h(s);
    Mat2c D = (psi_solve(z, s + hh, h) - psi_solve(z, s - hh, h)) / (2 * hh), U;
    U << cplx(0, -1) * z, q, q, cplx(0, 1) * z;
    Mat2c R = U * psi_solve(z, s, h);
    ds = std::max(ds, (D - R).norm() / R.norm());
  }
  c.note("det_err", det);
  c.note("sym_err", sym);
  c.note("ds_err", ds);
  c.expect(det <= 1e-8, "det Psi = 1");
  c.expect(sym <= 1e-7, "Psi(-z) symmetry");
  c.expect(ds <= 1e-5, "s-derivative Lax equation");
}

inline void tacnode(Check& c) {
  auto t = tacnode_table(0.0, hm(), 8);
  double args[][4] = {{0.2, 0.5, 0.3, -0.4}, {0.0, 0.0, 0.5, 0.1}, {-0.3, 0.4, -0.6, 0.5}, {0.6, -0.2, 1.0, 0.2},
                      {0.1, 0.1, 0.0, -0.8}};
  double sym = 0.0;
  for (auto& a : args)
    sym = std::max(sym, std::abs(tacnode_value(t, a[0], a[1], a[2], a[3]) - tacnode_value(t, -a[1], -a[0], a[3], a[2])));
  auto at = airy_tacnode_table(0.0);
  double eq = 0.0;
  double eqa[][4] = {{0.0, 0.0, 0.0, 0.0}, {0.2, 0.5, 0.3, -0.4}, {-0.4, 0.4, -0.6, 0.5}};
  for (auto& a : eqa)
    eq = std::max(eq, std::abs(tacnode_value(t, a[0], a[1], a[2], a[3]) - tacnode_via_airy(at, a[0], a[1], a[2], a[3])));
  c.note("sym_err", sym);
  c.note("equiv_err", eq);
  c.note("K_tac_origin", tacnode_value(t, 0, 0, 0, 0).real());
  c.expect(sym <= 1e-6, "tacnode symmetry");
  c.expect(eq <= 1e-3, "tacnode vs Airy-operator form");
}

inline void pearcey(Check& c) {
  PearceyOptions wide;
  wide.truncation = 10.0;
  double trunc = 0.0, parity = 0.0, quad = 0.0;
  double args[][4] = {{0.3, -0.2, 0.5, 1.1}, {0.0, 0.0, 0.0, 0.0}, {-0.5, 0.4, 0.2, -0.3}};
  for (auto& a : args) {
    auto k = pearcey_kernel(a[0], a[1], a[2], a[3]);
    auto w = pearcey_kernel(a[0], a[1], a[2], a[3], wide);
    auto p = pearcey_kernel(a[0], a[1], -a[2], -a[3]);
    trunc = std::max(trunc, std::abs(k.value - w.value));
    parity = std::max(parity, std::abs(k.value - p.value) - std::max(k.quad_estimate, 1e-13));
    quad = std::max(quad, k.quad_estimate);
  }
  c.note("truncation_change", trunc);
  c.note("parity_excess", parity);
  c.note("quad_estimate", quad);
  c.expect(trunc <= 1e-10, "contour truncation doubling");
  c.expect(parity <= 0.0, "parity within quadrature tolerance");
}

inline void finite(Check& c) {
  auto ctx = correlation_context(8, 12.0, 0.5);
  int M = 4 * static_cast<int>(ctx.lm.size()) + 16;
  double t = 5.0, trace = 0.0, x = 0.3, y = -1.1;
  cplx rep = 0.0;
  for (int i = 0; i < M; ++i) {
    double z = -pi + 2 * pi * i / M;
    trace += corr_kernel(ctx, t, t, z, z).tilde.real();
    rep += corr_kernel(ctx, t, t, x, z).tilde * corr_kernel(ctx, t, t, z, y).tilde;
  }
  trace *= 2 * pi / M;
  double rerr = std::abs(rep * (2 * pi / M) - corr_kernel(ctx, t, t, x, y).tilde);
  c.note("trace", trace);
  c.note("reproducing_err", rerr);
  c.expect(std::abs(trace - 8.0) <= 1e-6, "trace = n");
  c.expect(rerr <= 1e-6, "reproducing property");
  auto pp = pearcey_probe({100, 200, 400}, 16.0);
  for (auto& p : pp) c.note("pearcey_err_n" + std::to_string(p.n), p.error);
  c.expect(pp[1].error < pp[0].error && pp[2].error < pp[1].error, "Pearcey probe strictly decreasing");
  c.expect(pp[2].error <= 0.1, "Pearcey probe final error <= 0.1");
  auto tp = tacnode_probe({64, 128, 256}, 0.0, hm());
  for (auto& p : tp) c.note("tacnode_err_n" + std::to_string(p.n), p.error);
  c.expect(tp[1].error < tp[0].error && tp[2].error < tp[1].error, "tacnode probe strictly decreasing");
}

inline void lattice(Check& c) {
  for (auto ce : {CylinderEnsemble{8, 8, {0, 2}, {0, 2}}, CylinderEnsemble{12, 12, {-2, 0, 2}, {-2, 0, 2}}}) {
    auto r = km_discrete_check(ce);
    c.expect(r.equal, "LGV identity n=" + std::to_string(ce.n()));
  }
  std::vector<double> errs;
  for (int N : {16, 32, 48}) {
    auto h = dp_winding_histogram(12, N, {0, 2});
    auto wd = winding_distribution(2, brownian_time(2, 12, N), 4, 64);
    double e = 0.0;
    for (int o = -4; o <= 4; ++o) e = std::max(e, std::abs((h.count(o) ? h.at(o) : 0.0) - wd.prob(o)));
    errs.push_back(e);
    c.note("winding_err_N" + std::to_string(N), e);
  }
  c.expect(errs[1] < errs[0] && errs[2] < errs[1], "DP winding histogram error decreasing");
}

inline void heat(Check& c) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double a = -pi + std::fmod(0.61 * i, 2 * pi), b = -pi + std::fmod(1.37 * i + 0.5, 2 * pi);
    double t = 0.05 + std::fmod(0.173 * i, 4.0), tau = std::fmod(0.219 * i, 1.0);
    int n = 1 + i % 12;
    cplx u = heat_kernel_images(a, b, t, tau, n), v = heat_kernel_fourier(a, b, t, tau, n);
    worst = std::max(worst, std::abs(u - v) / std::max(1.0, std::abs(u)));
  }
  c.note("max_err", worst);
  c.expect(worst <= 1e-12, "image and Fourier series agree");
}

}  // namespace detail

struct Criterion {
  int id;
  const char* name;
  std::function<void(detail::Check&)> run;
};

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "Legendre relation", detail::legendre},
      {2, "parametrization roundtrip", detail::parametrization},
      {3, "equilibrium measure", detail::equilibrium},
      {4, "g-function variational conditions", detail::variational},
      {5, "Hankel deformation equation", detail::deformation},
      {6, "winding number distributions", detail::winding},
      {7, "recurrence coefficient asymptotics", detail::recurrence},
      {8, "Hastings-McLeod solution", detail::hastings},
      {9, "Lax system", detail::lax},
      {10, "tacnode kernel", detail::tacnode},
      {11, "Pearcey kernel quadrature", detail::pearcey},
      {12, "finite-n correlation kernel", detail::finite},
      {13, "lattice walker oracle", detail::lattice},
      {14, "heat kernel dual series", detail::heat},
  };
  return all;
}

inline Result run_one(const Criterion& cr) {
  auto t0 = std::chrono::steady_clock::now();
  detail::Check c;
  c.msg.precision(6);
  try {
    cr.run(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.msg << "exception: " << e.what();
  }
  Result r{cr.id, cr.name, c.ok, c.msg.str(), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs the selected criteria (all when empty), calling report after each.
inline std::vector<Result> run(const std::vector<int>& ids, const std::function<void(const Result&)>& report) {
  std::vector<Result> out;
  for (const auto& cr : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), cr.id) == ids.end()) continue;
    out.push_back(run_one(cr));
    if (report) report(out.back());
  }
  return out;
}

inline std::string format_line(const Result& r) {
  std::ostringstream s;
  s << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.id << ". " << r.name << " (" << std::fixed;
  s.precision(1);
  s << r.seconds << " s): " << r.detail;
  return s.str();
}

}  // namespace nibm::acceptance
