#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/mpfr.hpp>

#include "nibm/dgop.hpp"
#include "nibm/limit_kernels.hpp"
#include "nibm/phase.hpp"

namespace nibm {

using mpfr_real = boost::multiprecision::mpfr_float;

// One-particle heat kernel on the circle with tau-twisted periodicity, as a sum over images.
inline cplx heat_kernel_images(double a, double b, double t, double tau, int n) {
  if (!(t > 0.0) || n < 1) throw domain_error("heat_kernel: need t > 0 and n >= 1");
  double y = std::remainder(b - a, 2.0 * pi), c = n / (2.0 * t);
  long K = static_cast<long>(std::ceil(std::sqrt(40.0 / c) / (2.0 * pi))) + 1;
  cplx s = 0.0;
  for (long k = -K; k <= K; ++k) {
    double u = y + 2.0 * pi * k;
    s += std::exp(-c * u * u) * std::polar(1.0, 2.0 * pi * k * tau);
  }
  // undo the reduction of b - a to [-pi, pi]
  double shift = std::round((b - a - y) / (2.0 * pi));
  return std::sqrt(c / pi) * s * std::polar(1.0, -2.0 * pi * shift * tau);
}

// The same kernel as (1/2pi) sum over x in (Z + tau)/n of e^{-t n x^2 / 2} e^{-i n x (b - a)}.
inline cplx heat_kernel_fourier(double a, double b, double t, double tau, int n) {
  if (!(t > 0.0) || n < 1) throw domain_error("heat_kernel: need t > 0 and n >= 1");
  double fr = tau - std::floor(tau), c = t / (2.0 * n);
  long K = static_cast<long>(std::ceil(std::sqrt(40.0 / c))) + 1;
  cplx s = 0.0;
  for (long k = -K; k <= K; ++k) {
    double m = k + fr;
    s += std::exp(-c * m * m) * std::polar(1.0, -m * (b - a));
  }
  return s / (2.0 * pi);
}

// Picks the representation with fewer significant terms.
inline cplx heat_kernel(double a, double b, double t, double tau, int n) {
  return t / n < 2.0 * pi ? heat_kernel_images(a, b, t, tau, n) : heat_kernel_fourier(a, b, t, tau, n);
}

// det[P(a_i; b_j; t; tau)] for n = |A| particles.
inline cplx km_determinant(const std::vector<double>& A, const std::vector<double>& B, double t, double tau) {
  auto n = static_cast<int>(A.size());
  if (n < 1 || B.size() != A.size()) throw domain_error("km_determinant: need equally many start and end angles");
  for (const auto* v : {&A, &B})
    for (int i = 0; i < n; ++i) {
      if ((*v)[i] < -pi || (*v)[i] >= pi) throw domain_error("km_determinant: angle outside [-pi, pi)");
      if (i && !((*v)[i] > (*v)[i - 1])) throw domain_error("km_determinant: angles must be strictly increasing");
    }
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = heat_kernel(A[i], B[j], t, tau, n);
  return M.determinant();
}

template <class Real = double>
struct CorrelationContext {
  int n = 0;
  double T = 0.0, tau = 0.0;
  unsigned digits = 0;
  LatticeMeasure<Real> lm;
  RecurrenceTable<Real> rt;
};

// Lattice and recurrence coefficients through degree n. For Real = mpfr_real the working precision is set to
// digits for the lifetime of the context's use.
template <class Real = double>
CorrelationContext<Real> correlation_context(int n, double T, double tau, unsigned digits = 0) {
  if constexpr (!std::is_same_v<Real, double>) {
    if (digits < 20) throw domain_error("correlation_context: need at least 20 digits");
    Real::default_precision(digits);
  }
  CorrelationContext<Real> c;
  c.n = n;
  c.T = T;
  c.tau = tau;
  c.digits = digits ? digits : 16;
  c.lm = build_lattice<Real>(n, tau, T);
  c.rt = stieltjes(c.lm, n, false);
  return c;
}

// Sums sum_s r_k(s) e^{-a n s^2 / 2} e^{i x n s} for every k < n, with r_k = p_k / sqrt(h_k).
template <class Real>
struct STable {
  std::vector<cplx> value;
  std::vector<double> magnitude;  // sum of |terms|, for cancellation accounting
};

namespace detail {

template <class Real>
struct NodeWeights {
  std::vector<Real> re, im, abs;
};

template <class Real>
NodeWeights<Real> node_weights(const CorrelationContext<Real>& c, double a, double x) {
  using std::cos;
  using std::exp;
  using std::sin;
  NodeWeights<Real> w;
  std::size_t N = c.lm.size();
  w.re.resize(N);
  w.im.resize(N);
  w.abs.resize(N);
  // r_k carries e^{-T n s^2 / 4} inside the recurrence, so the weight is e^{n s^2 (T/4 - a/2)}
  Real q = Real(c.n) * (Real(c.T) / 4 - Real(a) / 2);
  for (std::size_t i = 0; i < N; ++i) {
    const Real& s = c.lm.nodes[i];
    w.abs[i] = exp(q * s * s);
    Real ph = Real(x) * Real(c.n) * s;
    w.re[i] = w.abs[i] * cos(ph);
    w.im[i] = w.abs[i] * sin(ph);
  }
  return w;
}

// Runs u_k(s) = r_k(s) e^{-T n s^2/4} through the normalized recurrence and accumulates, per degree, the sums
// against each weight set.
template <class Real>
void degree_sums(const CorrelationContext<Real>& c, const std::vector<const NodeWeights<Real>*>& ws,
                 std::vector<std::vector<cplx>>& out, std::vector<std::vector<double>>& mag) {
  using std::abs;
  using std::exp;
  using std::sqrt;
  std::size_t N = c.lm.size(), W = ws.size();
  int n = c.n;
  out.assign(W, std::vector<cplx>(n));
  mag.assign(W, std::vector<double>(n));
  std::vector<Real> u(N), um(N, Real(0));
  Real r0 = 1 / sqrt(exp(c.rt.log_h[0]));
  for (std::size_t i = 0; i < N; ++i) u[i] = r0 * exp(-Real(c.n) * Real(c.T) * c.lm.nodes[i] * c.lm.nodes[i] / 4);
  std::vector<Real> acc_re(W), acc_im(W), acc_abs(W);
  Real a_prev(0), tmp;
  for (int k = 0; k < n; ++k) {
    for (std::size_t w = 0; w < W; ++w) acc_re[w] = acc_im[w] = acc_abs[w] = 0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t w = 0; w < W; ++w) {
        acc_re[w] += u[i] * ws[w]->re[i];
        acc_im[w] += u[i] * ws[w]->im[i];
        acc_abs[w] += abs(u[i]) * ws[w]->abs[i];
      }
    for (std::size_t w = 0; w < W; ++w) {
      out[w][k] = cplx(static_cast<double>(acc_re[w]), static_cast<double>(acc_im[w]));
      mag[w][k] = static_cast<double>(acc_abs[w]);
    }
    if (k + 1 == n) break;
    Real a_next = sqrt(c.rt.gamma_sq[k + 1]);
    const Real& b = c.rt.beta[k];
    for (std::size_t i = 0; i < N; ++i) {
      tmp = ((c.lm.nodes[i] - b) * u[i] - a_prev * um[i]) / a_next;
      um[i] = u[i];
      u[i] = tmp;
    }
    a_prev = a_next;
  }
}

}  // namespace detail

// S_{k,a}(x) for all k < n, scaled by 1/sqrt(h_k) (so the value returned is S_{k,a}(x) / sqrt(h_k)).
template <class Real>
STable<Real> s_transform_table(const CorrelationContext<Real>& c, double a, double x) {
  if (!(a > 0.0) || !(a < c.T)) throw domain_error("s_transform: need 0 < a < T");
  auto w = detail::node_weights(c, a, x);
  std::vector<std::vector<cplx>> out;
  std::vector<std::vector<double>> mag;
  detail::degree_sums(c, {&w}, out, mag);
  STable<Real> t{std::move(out[0]), std::move(mag[0])};
  for (auto& v : t.value) v /= double(c.n);
  for (auto& v : t.magnitude) v /= double(c.n);
  return t;
}

// S_{k,a}(x) itself, as mantissa and log scale.
template <class Real>
Scaled s_transform(const CorrelationContext<Real>& c, int k, double a, double x) {
  if (k < 0 || k >= c.n) throw domain_error("s_transform: degree outside [0, n)");
  auto t = s_transform_table(c, a, x);
  return {t.value[static_cast<std::size_t>(k)], 0.5 * static_cast<double>(c.rt.log_h[static_cast<std::size_t>(k)])};
}

// W-circ_{[i,j)}(x, y): the free propagator over t_j - t_i when t_j > t_i, zero otherwise.
inline cplx w_circ(double t_i, double t_j, double x, double y, double tau, int n) {
  return t_j > t_i ? heat_kernel(x, y, t_j - t_i, tau, n) : cplx(0.0);
}

struct FiniteKernelValue {
  cplx value, tilde, w_circ;
  double cancellation_digits = 0.0;  // log10 of (sum of |terms|) / |K~|
};

// K_{t_i,t_j}(x, y) = K~ - W-circ, with K~ = (n/2pi) sum_{k<n} S_{k,T-t_i}(x) S_{k,t_j}(-y) / h_k.
template <class Real>
FiniteKernelValue corr_kernel(const CorrelationContext<Real>& c, double t_i, double t_j, double x, double y) {
  if (!(t_i > 0.0 && t_i < c.T && t_j > 0.0 && t_j < c.T)) throw domain_error("corr_kernel: times outside (0, T)");
  auto wa = detail::node_weights(c, c.T - t_i, x), wb = detail::node_weights(c, t_j, -y);
  std::vector<std::vector<cplx>> out;
  std::vector<std::vector<double>> mag;
  detail::degree_sums(c, {&wa, &wb}, out, mag);
  cplx acc = 0.0;
  double bound = 0.0;
  for (int k = 0; k < c.n; ++k) {
    acc += out[0][k] * out[1][k];
    bound += mag[0][k] * mag[1][k];
  }
  double scale = 1.0 / (2.0 * pi * c.n);
  FiniteKernelValue r;
  r.tilde = acc * scale;
  r.w_circ = w_circ(t_i, t_j, x, y, c.tau, c.n);
  r.value = r.tilde - r.w_circ;
  r.cancellation_digits = std::log10(bound * scale / std::max(std::abs(r.tilde), 1e-300));
  return r;
}

// K_{t,t}(x, x) on a uniform grid of m points in [-pi, pi).
template <class Real>
std::vector<double> density_grid(const CorrelationContext<Real>& c, double t, int m) {
  std::vector<double> d(m);
  for (int i = 0; i < m; ++i) {
    double x = -pi + 2.0 * pi * i / m;
    d[i] = corr_kernel(c, t, t, x, x).value.real();
  }
  return d;
}

// Digits needed so that the lattice sums keep about 16 significant digits after cancellation.
inline unsigned kernel_digits(int n, double T, double t_i, double t_j) {
  double edge = support_edge(T), e = 0.0;
  for (double t : {t_i, T - t_j}) e = std::max(e, n * std::abs(T / 4 - t / 2) * edge * edge);
  double lost = e / std::log(10.0);
  return lost < 3.0 ? 16u : static_cast<unsigned>(30 + lost);
}

struct ProbePoint {
  int n = 0;
  double value = 0.0, target = 0.0, error = 0.0, cancellation_digits = 0.0;
  unsigned digits = 0;
};

namespace detail {

template <class Real>
FiniteKernelValue kernel_with_digits(int n, double T, double tau, double t_i, double t_j, double x, double y,
                                     unsigned digits) {
  auto c = correlation_context<Real>(n, T, tau, digits);
  return corr_kernel(c, t_i, t_j, x, y);
}

// Evaluates the finite kernel with enough working precision; raises the precision until the cancellation
// accounting leaves at least 16 digits.
inline FiniteKernelValue adaptive_kernel(int n, double T, double tau, double t_i, double t_j, double x, double y,
                                         unsigned& digits) {
  digits = kernel_digits(n, T, t_i, t_j);
  for (int pass = 0; pass < 4; ++pass) {
    FiniteKernelValue v = digits <= 16 ? kernel_with_digits<double>(n, T, tau, t_i, t_j, x, y, 0)
                                       : kernel_with_digits<mpfr_real>(n, T, tau, t_i, t_j, x, y, digits);
    double kept = (digits <= 16 ? 16.0 : double(digits)) - v.cancellation_digits;
    if (kept >= (digits <= 16 ? 12.0 : 16.0)) return v;
    digits = static_cast<unsigned>(std::max(double(digits), v.cancellation_digits) + 30);
  }
  throw solver_error("adaptive_kernel: cancellation exceeds working precision");
}

}  // namespace detail

struct ProbeArgs {
  double tau_i = 0.0, tau_j = 0.0, xi = 0.0, eta = 0.0;
  bool half_parity_tau = true;  // tau = eps(n); otherwise tau below
  double tau = 0.0;
};

// |K_{t_i,t_j}(x, y) d n^{-3/4} - K^P_{-tau_j,-tau_i}(eta, xi)| under the cusp scaling around t^c.
inline std::vector<ProbePoint> pearcey_probe(const std::vector<int>& ns, double T, const ProbeArgs& a = {}) {
  auto pd = phase_data(T);
  if (pd.regime != Regime::supercritical) throw regime_error("pearcey_probe: T must exceed pi^2");
  double d = pearcey_d(pd);
  double target = pearcey_kernel(-a.tau_j, -a.tau_i, a.eta, a.xi).value.real();
  std::vector<ProbePoint> out;
  for (int n : ns) {
    double sq = std::sqrt(double(n)), jac = d * std::pow(double(n), -0.75);
    double ti = pd.t_c + d * d / sq * a.tau_i, tj = pd.t_c + d * d / sq * a.tau_j;
    double x = -pi - jac * a.xi, y = -pi - jac * a.eta;
    double tau = a.half_parity_tau ? half_parity(n) : a.tau;
    ProbePoint p;
    p.n = n;
    auto v = detail::adaptive_kernel(n, T, tau, ti, tj, x, y, p.digits);
    p.value = v.value.real() * jac;
    p.target = target;
    p.error = std::abs(v.value * jac - target);
    p.cancellation_digits = v.cancellation_digits;
    out.push_back(p);
  }
  return out;
}

inline double tacnode_T(int n, double sigma) {
  return pi * pi * (1.0 - std::pow(2.0, -2.0 / 3.0) * sigma * std::pow(double(n), -2.0 / 3.0));
}

// |K_{t_i,t_j}(x, y) d n^{-2/3} - K^tac_{tau_i,tau_j}(xi, eta; sigma)| under the critical scaling around T/2.
inline std::vector<ProbePoint> tacnode_probe(const std::vector<int>& ns, double sigma, const HMSolution& hm,
                                             const ProbeArgs& a = {}) {
  double d = tacnode_d();
  double target = tacnode_kernel(a.tau_i, a.tau_j, a.xi, a.eta, sigma, hm).value.real();
  std::vector<ProbePoint> out;
  for (int n : ns) {
    double T = tacnode_T(n, sigma), cb = std::cbrt(double(n)), jac = d / (cb * cb);
    double ti = T / 2 + d * d / cb * a.tau_i, tj = T / 2 + d * d / cb * a.tau_j;
    double x = -pi - jac * a.xi, y = -pi - jac * a.eta;
    double tau = a.half_parity_tau ? half_parity(n) : a.tau;
    ProbePoint p;
    p.n = n;
    auto v = detail::adaptive_kernel(n, T, tau, ti, tj, x, y, p.digits);
    p.value = v.value.real() * jac;
    p.target = target;
    p.error = std::abs(v.value * jac - target);
    p.cancellation_digits = v.cancellation_digits;
    out.push_back(p);
  }
  return out;
}

}  // namespace nibm
