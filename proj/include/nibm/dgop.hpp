#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "nibm/phase.hpp"

namespace nibm {

struct rank_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// epsilon(n): 0 for odd n, 1/2 for even n.
inline double half_parity(int n) { return n % 2 ? 0.0 : 0.5; }

// Value carried as mant * exp(log_scale).
struct Scaled {
  cplx mant{0.0};
  double log_scale = 0.0;
  cplx value() const { return mant * std::exp(log_scale); }
  cplx log_value() const { return std::log(mant) + log_scale; }
};

template <class Real = double>
struct LatticeMeasure {
  int n = 0;
  double tau = 0.0, T = 0.0, x_max = 0.0;
  long k_lo = 0;
  std::vector<Real> nodes, log_weights, weights;
  double tail_bound = 0.0;
  std::size_t size() const { return nodes.size(); }
};

// Support edge of the equilibrium measure for weight exp(-T n x^2 / 2).
inline double support_edge(double T) { return T <= T_crit ? 2.0 / std::sqrt(T) : phase_data(T).beta; }

// Nodes (k + tau)/n with |x| <= x_max; x_max is widened until the neglected tail is below 1e-32.
template <class Real = double>
LatticeMeasure<Real> build_lattice(int n, double tau, double T, double x_max = 0.0) {
  using std::exp;
  if (n < 1 || !(T > 0.0)) throw domain_error("build_lattice: need n >= 1 and T > 0");
  LatticeMeasure<Real> lm;
  lm.n = n;
  lm.T = T;
  lm.tau = tau - std::floor(tau);
  double X = std::max({x_max, 3.0 * support_edge(T), std::sqrt(2.0 * std::log(1e32) / (T * n))});
  auto tail = [&](double x) { return 2.0 * std::exp(-0.5 * T * n * x * x) / (-std::expm1(-T * x)); };
  while (tail(X) > 1e-32) X *= 1.05;
  lm.x_max = X;
  lm.tail_bound = tail(X);
  long k_lo = static_cast<long>(std::ceil(-X * n - lm.tau)), k_hi = static_cast<long>(std::floor(X * n - lm.tau));
  lm.k_lo = k_lo;
  Real tr(lm.tau);
  for (long k = k_lo; k <= k_hi; ++k) {
    Real x = (Real(k) + tr) / n;
    Real lw = -Real(0.5 * T * n) * x * x;
    lm.nodes.push_back(x);
    lm.log_weights.push_back(lw);
    lm.weights.push_back(exp(lw));
  }
  return lm;
}

// Three-term recurrence x p_j = p_{j+1} + beta_j p_j + gamma_j^2 p_{j-1}, h_j = <p_j, p_j>,
// plus the orthonormal vectors q_j(x) = p_j(x) sqrt(w(x)/(n h_j)) on the nodes when kept.
template <class Real = double>
struct RecurrenceTable {
  int degree_max = 0;
  std::vector<Real> log_h, beta, gamma_sq;
  std::vector<std::vector<Real>> q;
};

// Discrete Stieltjes procedure in normalized (Lanczos) form.
template <class Real>
RecurrenceTable<Real> stieltjes(const LatticeMeasure<Real>& lm, int m, bool keep_vectors = true,
                                bool reorthogonalize = std::is_same_v<Real, double>) {
  using std::log;
  using std::sqrt;
  std::size_t N = lm.size();
  if (m < 0 || 2 * static_cast<std::size_t>(m) > N) throw rank_error("stieltjes: degree too large for lattice");
  RecurrenceTable<Real> rt;
  rt.degree_max = m;
  rt.log_h.resize(m + 1);
  rt.beta.resize(m + 1);
  rt.gamma_sq.assign(m + 1, Real(0));
  std::vector<std::vector<Real>> basis;
  std::vector<Real> v(N), prev(N, Real(0)), r(N);
  Real h0(0);
  for (std::size_t i = 0; i < N; ++i) h0 += lm.weights[i];
  h0 /= lm.n;
  rt.log_h[0] = log(h0);
  Real s0 = sqrt(h0 * lm.n);
  for (std::size_t i = 0; i < N; ++i) v[i] = sqrt(lm.weights[i]) / s0;
  Real b(0);
  for (int j = 0; j <= m; ++j) {
    Real a(0);
    for (std::size_t i = 0; i < N; ++i) a += lm.nodes[i] * v[i] * v[i];
    rt.beta[j] = a;
    if (keep_vectors || reorthogonalize) basis.push_back(v);
    if (j == m) break;
    for (std::size_t i = 0; i < N; ++i) r[i] = (lm.nodes[i] - a) * v[i] - b * prev[i];
    if (reorthogonalize) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) {
          Real c(0);
          for (std::size_t i = 0; i < N; ++i) c += u[i] * r[i];
          for (std::size_t i = 0; i < N; ++i) r[i] -= c * u[i];
        }
    }
    Real nrm2(0);
    for (std::size_t i = 0; i < N; ++i) nrm2 += r[i] * r[i];
    if (!(nrm2 > 0)) throw rank_error("stieltjes: recurrence broke down");
    rt.gamma_sq[j + 1] = nrm2;
    rt.log_h[j + 1] = rt.log_h[j] + log(nrm2);
    b = sqrt(nrm2);
    prev.swap(v);
    for (std::size_t i = 0; i < N; ++i) v[i] = r[i] / b;
  }
  if (keep_vectors) rt.q = std::move(basis);
  return rt;
}

template <class Real = double>
Real hankel_log(int n, double T, double tau) {
  auto lm = build_lattice<Real>(n, tau, T);
  auto rt = stieltjes(lm, n, false);
  Real s(0);
  for (int j = 0; j < n; ++j) s += rt.log_h[j];
  return s;
}

// gamma_{n,n}^2 = h_n / h_{n-1}.
template <class Real = double>
Real gamma_sq_nn(int n, double T, double tau) {
  auto lm = build_lattice<Real>(n, tau, T);
  return stieltjes(lm, n, false).gamma_sq[n];
}

// p_k(z) and p_{k-1}(z) with a shared scale, and their derivatives.
struct PolyPair {
  cplx pk, pkm1, dpk, dpkm1;
  double log_scale = 0.0;
};

template <class Real>
PolyPair eval_poly_pair(const RecurrenceTable<Real>& rt, int k, cplx z) {
  if (k < 0 || k > rt.degree_max + 1) throw domain_error("eval_poly: degree out of range");
  cplx p0 = 0.0, p1 = 1.0, d0 = 0.0, d1 = 0.0;
  double ls = 0.0;
  for (int j = 0; j < k; ++j) {
    double bj = static_cast<double>(rt.beta[j]), gj = static_cast<double>(rt.gamma_sq[j]);
    cplx p2 = (z - bj) * p1 - gj * p0, d2 = p1 + (z - bj) * d1 - gj * d0;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
    double s = std::abs(p1);
    if (s > 0.0 && std::isfinite(s)) {
      p0 /= s;
      p1 /= s;
      d0 /= s;
      d1 /= s;
      ls += std::log(s);
    }
  }
  return {p1, p0, d1, d0, ls};
}

template <class Real>
Scaled eval_poly(const RecurrenceTable<Real>& rt, int k, cplx z) {
  auto pp = eval_poly_pair(rt, k, z);
  return {pp.pk, pp.log_scale};
}

// (1/n) sum_x p_k(x) w(x) / (z - x), through the stored orthonormal vectors. The sum cancels
// down to about exp(-n(g(z) - l)), so Real must carry correspondingly many digits for large k.
template <class Real>
Scaled cauchy_transform(const LatticeMeasure<Real>& lm, const RecurrenceTable<Real>& rt, int k, cplx z,
                        double pole_eps = 1e-3) {
  using std::exp;
  using std::sqrt;
  if (rt.q.empty() || k > rt.degree_max) throw domain_error("cauchy_transform: vectors for degree k not kept");
  Real re(0), im(0), zr(z.real()), zi(z.imag()), rn = 1 / sqrt(Real(lm.n));
  const auto& qk = rt.q[k];
  for (std::size_t i = 0; i < lm.size(); ++i) {
    if (std::abs(z - static_cast<double>(lm.nodes[i])) < pole_eps / lm.n)
      throw domain_error("cauchy_transform: z too close to a lattice node");
    Real f = qk[i] * exp(lm.log_weights[i] / 2) * rn, dr = zr - lm.nodes[i], den = dr * dr + zi * zi;
    re += f * dr / den;
    im -= f * zi / den;
  }
  return {cplx(static_cast<double>(re), static_cast<double>(im)), 0.5 * static_cast<double>(rt.log_h[k])};
}

// sum_{k<n} p_k(z) p_k(w) / h_k by the Christoffel-Darboux formula.
template <class Real>
Scaled cd_kernel(const RecurrenceTable<Real>& rt, int n, cplx z, cplx w) {
  if (n < 1 || n > rt.degree_max) throw domain_error("cd_kernel: n out of range");
  double lh = static_cast<double>(rt.log_h[n - 1]);
  auto a = eval_poly_pair(rt, n, z);
  if (std::abs(z - w) < 1e-8) return {a.dpk * a.pkm1 - a.dpkm1 * a.pk, 2.0 * a.log_scale - lh};
  auto b = eval_poly_pair(rt, n, w);
  return {(a.pk * b.pkm1 - a.pkm1 * b.pk) / (z - w), a.log_scale + b.log_scale - lh};
}

}  // namespace nibm
