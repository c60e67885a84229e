#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "nibm/special_fn.hpp"

namespace nibm {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Mat2c = Eigen::Matrix2cd;

// Hastings-McLeod solution of q'' = s q + 2 q^3 on a uniform grid, with a quintic Hermite interpolant.
struct HMSolution {
  double L = 0.0, h = 0.0;
  std::vector<double> s_grid, q, q_prime;
  int interpolant_order = 5;
  int newton_iterations = 0;
  double residual = 0.0;

  bool contains(double s) const { return s >= s_grid.front() && s <= s_grid.back(); }

  // {q, q', q''} at s.
  std::array<double, 3> eval(double s) const {
    if (!contains(s)) throw domain_error("HMSolution: s outside the grid");
    std::size_t N = s_grid.size() - 1;
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>((s - s_grid[0]) / h), N - 1);
    double t = (s - s_grid[i]) / h;
    auto qpp = [&](std::size_t j) { return s_grid[j] * q[j] + 2.0 * q[j] * q[j] * q[j]; };
    double c0 = q[i], c1 = h * q_prime[i], c2 = 0.5 * h * h * qpp(i);
    double A = q[i + 1] - c0 - c1 - c2, B = h * q_prime[i + 1] - c1 - 2.0 * c2, C = h * h * qpp(i + 1) - 2.0 * c2;
    double c3 = 10.0 * A - 4.0 * B + 0.5 * C, c4 = -15.0 * A + 7.0 * B - C, c5 = 6.0 * A - 3.0 * B + 0.5 * C;
    double v = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
    double d = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
    double dd = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
    return {v, d / h, dd / (h * h)};
  }
  double operator()(double s) const { return eval(s)[0]; }
};

namespace detail {

inline double hm_guess(double s) {
  double x = std::clamp(-s / 3.0, 0.0, 1.0), chi = x * x * (3.0 - 2.0 * x);
  return (1.0 - chi) * airy(s).ai + chi * std::sqrt(std::max(-s, 0.0) / 2.0);
}

}  // namespace detail

// Newton on the 4th-order finite-difference discretization, q(L) = Ai(L), q(-L) = sqrt(L/2).
inline HMSolution hastings_mcleod(double L = 8.0, int N = 4000) {
  if (!(L >= 6.0 && L <= 12.0) || N < 400) throw domain_error("hastings_mcleod: need L in [6,12] and N >= 400");
  HMSolution hm;
  hm.L = L;
  hm.h = 2.0 * L / N;
  double h = hm.h, c = 1.0 / (12.0 * h * h);
  hm.s_grid.resize(N + 1);
  hm.q.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    hm.s_grid[i] = -L + i * h;
    hm.q[i] = detail::hm_guess(hm.s_grid[i]);
  }
  hm.s_grid[N] = L;
  hm.q[0] = std::sqrt(L / 2.0);
  hm.q[N] = airy(L).ai;
  auto& q = hm.q;
  const auto& s = hm.s_grid;
  auto stencil = [&](int i) -> std::array<std::pair<int, double>, 6> {
    if (i == 1) return {{{0, 10}, {1, -15}, {2, -4}, {3, 14}, {4, -6}, {5, 1}}};
    if (i == N - 1) return {{{N, 10}, {N - 1, -15}, {N - 2, -4}, {N - 3, 14}, {N - 4, -6}, {N - 5, 1}}};
    return {{{i - 2, -1}, {i - 1, 16}, {i, -30}, {i + 1, 16}, {i + 2, -1}, {i, 0}}};
  };
  int M = N - 1;
  Eigen::VectorXd F(M);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0;; ++it) {
    if (it == 50) throw solver_error("hastings_mcleod: Newton did not converge");
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(6 * M);
    for (int i = 1; i < N; ++i) {
      double d2 = 0.0;
      for (auto [j, w] : stencil(i)) {
        d2 += w * q[j];
        if (j >= 1 && j <= M && w != 0.0) trip.emplace_back(i - 1, j - 1, c * w);
      }
      F[i - 1] = c * d2 - s[i] * q[i] - 2.0 * q[i] * q[i] * q[i];
      trip.emplace_back(i - 1, i - 1, -s[i] - 6.0 * q[i] * q[i]);
    }
    Eigen::SparseMatrix<double> J(M, M);
    J.setFromTriplets(trip.begin(), trip.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw solver_error("hastings_mcleod: singular Jacobian");
    Eigen::VectorXd dq = lu.solve(F);
    double step = dq.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(step)) throw solver_error("hastings_mcleod: Newton diverged");
    for (int i = 1; i < N; ++i) q[i] -= dq[i - 1];
    hm.newton_iterations = it + 1;
    if (step < 1e-12) break;
  }
  hm.q_prime.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    double d;
    if (i >= 3 && i <= N - 3)
      d = (-q[i - 3] + 9 * q[i - 2] - 45 * q[i - 1] + 45 * q[i + 1] - 9 * q[i + 2] + q[i + 3]) / 60.0;
    else if (i < 3)
      d = (-137 * q[i] + 300 * q[i + 1] - 300 * q[i + 2] + 200 * q[i + 3] - 75 * q[i + 4] + 12 * q[i + 5]) / 60.0;
    else
      d = -(-137 * q[i] + 300 * q[i - 1] - 300 * q[i - 2] + 200 * q[i - 3] - 75 * q[i - 4] + 12 * q[i - 5]) / 60.0;
    hm.q_prime[i] = d / h;
  }
  double r = 0.0;
  for (int i = 3; i <= N - 3; ++i) {
    double d2 = (2 * q[i - 3] - 27 * q[i - 2] + 270 * q[i - 1] - 490 * q[i] + 270 * q[i + 1] - 27 * q[i + 2] +
                 2 * q[i + 3]) /
                (180.0 * h * h);
    r = std::max(r, std::abs(d2 - s[i] * q[i] - 2.0 * q[i] * q[i] * q[i]));
  }
  hm.residual = r;
  return hm;
}

namespace detail {

// Coefficients m_k of the formal expansion Psi e^{i theta sigma3} ~ sum m_k zeta^{-k}, theta = 4 zeta^3/3 + s zeta.
inline std::vector<Mat2c> psi_series(double s, double q, double qp, int K) {
  const cplx I(0.0, 1.0);
  std::vector<cplx> a(K + 1, 0.0), c(K + 1, 0.0);
  a[0] = 1.0;
  auto A = [&](int k) { return k >= 0 ? a[k] : cplx(0.0); };
  auto C = [&](int k) { return k >= 0 ? c[k] : cplx(0.0); };
  cplx w = 2.0 * I * (s + q * q);
  for (int k = 1; k <= K; ++k) {
    c[k] = I / 8.0 * (double(k - 3) * C(k - 3) + w * C(k - 2) - 2.0 * I * qp * A(k - 2) + 4.0 * q * A(k - 1));
    a[k] = (qp / 4.0 * (double(k - 2) * C(k - 2) + w * C(k - 1) - 2.0 * I * qp * A(k - 1)) -
            I * q / 2.0 * (double(k - 1) * C(k - 1) + w * c[k])) /
           double(k);
  }
  std::vector<Mat2c> m(K + 1);
  for (int k = 0; k <= K; ++k) {
    double sg = k % 2 ? -1.0 : 1.0;
    m[k] << a[k], sg * c[k], c[k], sg * a[k];
  }
  return m;
}

inline Mat2c psi_asymptotic(cplx zeta, double s, double q, double qp) {
  auto m = psi_series(s, q, qp, 24);
  Mat2c acc = Mat2c::Identity();
  cplx zk = 1.0;
  double last = 1.0;
  for (std::size_t k = 1; k < m.size(); ++k) {
    zk /= zeta;
    Mat2c term = m[k] * zk;
    double nt = term.cwiseAbs().maxCoeff();
    if (nt > last) break;
    acc += term;
    last = nt;
    if (nt < 1e-18) break;
  }
  return acc;
}

}  // namespace detail

inline constexpr double psi_radius = 12.0;

// Column col (0 or 1) of Phi = Psi e^{i theta sigma3}, integrated inward from R e^{i ray}; ray must lie in a
// normalization sector.
inline Eigen::Vector2cd phi_column(cplx zeta, double s, const HMSolution& hm, int col, double ray, double tol = 1e-12) {
  if (std::abs(zeta) > psi_radius) throw domain_error("psi_solve: |zeta| exceeds the normalization radius");
  auto qv = hm.eval(s);
  double q = qv[0], qp = qv[1];
  const cplx I(0.0, 1.0);
  cplx z0 = std::polar(psi_radius, ray), dz = zeta - z0;
  Mat2c P0 = detail::psi_asymptotic(z0, s, q, qp);
  using state = std::vector<cplx>;
  state x{P0(0, col), P0(1, col)};
  auto rhs = [&](const state& y, state& dy, double t) {
    cplx z = z0 + t * dz, th = 4.0 * z * z + s;
    cplx b11 = -2.0 * I * q * q, b12 = 4.0 * z * q + 2.0 * I * qp, b21 = 4.0 * z * q - 2.0 * I * qp;
    // Phi = Psi e^{i theta sigma3}: the off-diagonal entry of the column picks up -/+ 2 i theta'.
    cplx y1 = b11 * y[0] + b12 * y[1], y2 = b21 * y[0] - b11 * y[1];
    if (col == 0) y2 += 2.0 * I * th * y[1];
    else y1 += -2.0 * I * th * y[0];
    dy[0] = y1 * dz;
    dy[1] = y2 * dz;
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<state>());
  double t = 0.0, dt = 1e-4;
  std::size_t steps = 0;
  while (t < 1.0) {
    if (t + dt > 1.0) dt = 1.0 - t;
    if (dt < 1e-14) throw solver_error("psi_solve: step size underflow");
    if (stepper.try_step(rhs, x, t, dt) == ode::success && ++steps > 2000000)
      throw solver_error("psi_solve: too many steps");
  }
  return {x[0], x[1]};
}

inline cplx psi_theta(cplx zeta, double s) { return 4.0 * zeta * zeta * zeta / 3.0 + s * zeta; }

inline Eigen::Vector2cd psi_column(cplx zeta, double s, const HMSolution& hm, int col, double ray, double tol = 1e-12) {
  cplx th = psi_theta(zeta, s), e = std::exp(cplx(0.0, col == 0 ? -1.0 : 1.0) * th);
  return phi_column(zeta, s, hm, col, ray, tol) * e;
}

// Rays on which column 1 (resp. 2) is recessive at infinity, chosen by the half-plane of zeta.
inline double psi_ray(cplx zeta, int col) {
  bool right = zeta.real() >= 0.0;
  if (col == 0) return right ? -pi / 6 : 7 * pi / 6;
  return right ? pi / 6 : 5 * pi / 6;
}

inline Mat2c psi_solve(cplx zeta, double s, const HMSolution& hm) {
  Mat2c P;
  P.col(0) = psi_column(zeta, s, hm, 0, psi_ray(zeta, 0));
  P.col(1) = psi_column(zeta, s, hm, 1, psi_ray(zeta, 1));
  return P;
}

inline Mat2c psi_conjugated(cplx zeta, double s, const HMSolution& hm) {
  Mat2c P;
  P.col(0) = phi_column(zeta, s, hm, 0, psi_ray(zeta, 0));
  P.col(1) = phi_column(zeta, s, hm, 1, psi_ray(zeta, 1));
  return P;
}

struct FG {
  cplx f, g;
};

inline FG f_g(cplx u, double s, const HMSolution& hm) {
  if (u.imag() == 0.0) throw domain_error("f_g: u must be off the real line");
  if (u.imag() > 0.0) {
    auto c = psi_column(u, s, hm, 1, psi_ray(u, 1));
    return {-c[0], -c[1]};
  }
  auto c = psi_column(u, s, hm, 0, psi_ray(u, 0));
  return {c[0], c[1]};
}

}  // namespace nibm
