#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "nibm/phase.hpp"
#include "nibm/quadrature.hpp"
#include "nibm/special_fn.hpp"

namespace nibm {

// Gaussian heat factor: 0 if s >= t, else exp(-(xi-eta)^2 / (2(t-s))) / sqrt(2 pi (t-s)).
inline double gaussian_phi(double s, double t, double xi, double eta) {
  if (s >= t) return 0.0;
  double d = t - s;
  return std::exp(-(xi - eta) * (xi - eta) / (2.0 * d)) / std::sqrt(2.0 * pi * d);
}

// Nystrom discretization of B_s(x,y) = Ai(x+y+s) and A_s = B_s^2 on [0, X].
struct AiryOperator {
  double s = 0.0, X = 0.0;
  std::vector<double> x, w;
  Eigen::MatrixXd B, A;
  Eigen::PartialPivLU<Eigen::MatrixXd> resolvent_factor;
  double spectral_radius = 0.0;
};

inline AiryOperator build_airy_operator(double s, double X = 16.0, int m = 80) {
  if (X < 10.0 || m < 80) throw domain_error("build_airy_operator: need X >= 10 and m >= 80");
  AiryOperator op;
  op.s = s;
  op.X = X;
  int panels = (m + 19) / 20;
  auto rule = composite_gl(0.0, X, panels, m / panels);
  op.x = rule.x;
  op.w = rule.w;
  int N = static_cast<int>(op.x.size());
  op.B.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= i; ++j) op.B(i, j) = op.B(j, i) = airy(op.x[i] + op.x[j] + s).ai;
  Eigen::VectorXd W = Eigen::Map<Eigen::VectorXd>(op.w.data(), N);
  op.A = op.B * W.asDiagonal() * op.B;
  Eigen::VectorXd sw = W.cwiseSqrt();
  Eigen::MatrixXd S = sw.asDiagonal() * op.A * sw.asDiagonal();
  op.spectral_radius = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  if (op.spectral_radius >= 1.0) throw regime_error("build_airy_operator: spectral radius of A_s >= 1");
  op.resolvent_factor.compute(Eigen::MatrixXd::Identity(N, N) - op.A * W.asDiagonal());
  return op;
}

struct QR {
  Eigen::VectorXd Q, R, Bdelta, Adelta;
};

// Q_s = (1 - A)^{-1} B delta_0 and R_s = (1 - A)^{-1} A delta_0 on the grid.
inline QR qr_functions(const AiryOperator& op) {
  int N = static_cast<int>(op.x.size());
  QR r;
  r.Bdelta.resize(N);
  for (int i = 0; i < N; ++i) r.Bdelta[i] = airy(op.x[i] + op.s).ai;
  Eigen::VectorXd W = Eigen::Map<const Eigen::VectorXd>(op.w.data(), N);
  r.Adelta = op.B * W.asDiagonal() * r.Bdelta;
  r.Q = op.resolvent_factor.solve(r.Bdelta);
  r.R = op.resolvent_factor.solve(r.Adelta);
  return r;
}

// Psi(zeta; s) from the Airy-operator representation.
inline Eigen::Matrix2cd psi_airy(cplx zeta, const AiryOperator& op, const QR& qr) {
  const cplx I(0.0, 1.0);
  auto E = [&](double x, double sg) { return std::exp(sg * I * (4.0 * zeta * zeta * zeta / 3.0 + (op.s + 2.0 * x) * zeta)); };
  cplx em_r = E(0.0, -1.0), em_q = 0.0, ep_r = E(0.0, 1.0), ep_q = 0.0;
  for (std::size_t i = 0; i < op.x.size(); ++i) {
    cplx em = E(op.x[i], -1.0) * op.w[i], ep = E(op.x[i], 1.0) * op.w[i];
    em_r += em * qr.R[i];
    em_q += em * qr.Q[i];
    ep_r += ep * qr.R[i];
    ep_q += ep * qr.Q[i];
  }
  Eigen::Matrix2cd P;
  P << em_r, -ep_q, -em_q, ep_r;
  return P;
}

inline double b_fn(double tau, double z, double sigma, double x) {
  double c13 = std::cbrt(2.0), c23 = std::cbrt(4.0);
  return std::exp(-2.0 / 3.0 * tau * tau * tau - tau * z - c13 * tau * x - tau * sigma / c23) *
         airy(c13 * x + z + sigma / c23 + tau * tau).ai;
}

// Resolvent functions at the Gauss-Legendre nodes of s in [sigma, sigma + S], for repeated kernel evaluations.
struct AiryTacnodeTable {
  double sigma = 0.0, S = 0.0;
  std::vector<double> s_nodes, s_weights;
  std::vector<std::vector<double>> x, w;
  std::vector<QR> qr;
};

inline AiryTacnodeTable airy_tacnode_table(double sigma, double S = 12.0, double X = 16.0, int m = 80, int s_per_panel = 10) {
  if (sigma < -1.0) throw domain_error("airy_tacnode_table: sigma must be >= -1");
  AiryTacnodeTable t;
  t.sigma = sigma;
  t.S = S;
  auto rule = composite_gl(sigma, sigma + S, static_cast<int>(std::ceil(S)), s_per_panel);
  t.s_nodes = rule.x;
  t.s_weights = rule.w;
  for (double s : t.s_nodes) {
    auto op = build_airy_operator(s, X, m);
    t.qr.push_back(qr_functions(op));
    t.x.push_back(op.x);
    t.w.push_back(op.w);
  }
  return t;
}

// p^_1(z; s, tau) = <b_{tau,-z,s}, R_s + delta_0> - <b_{tau,z,s}, Q_s> at the k-th s node.
inline double p_hat1(const AiryTacnodeTable& t, std::size_t k, double z, double tau) {
  double s = t.s_nodes[k], acc = b_fn(tau, -z, s, 0.0);
  const auto& qr = t.qr[k];
  for (std::size_t i = 0; i < t.x[k].size(); ++i) {
    double xi = t.x[k][i], wi = t.w[k][i];
    acc += wi * (b_fn(tau, -z, s, xi) * qr.R[i] - b_fn(tau, z, s, xi) * qr.Q[i]);
  }
  return acc;
}

inline double l_tac_tilde(const AiryTacnodeTable& t, double u, double v, double tau1, double tau2) {
  double acc = 0.0;
  for (std::size_t k = 0; k < t.s_nodes.size(); ++k)
    acc += t.s_weights[k] * (p_hat1(t, k, u, tau1) * p_hat1(t, k, v, -tau2) + p_hat1(t, k, -u, tau1) * p_hat1(t, k, -v, -tau2));
  return acc / std::cbrt(4.0);
}

inline double l_tac(const AiryTacnodeTable& t, double u, double v, double tau1, double tau2) {
  return l_tac_tilde(t, u, v, tau1, tau2) - gaussian_phi(2.0 * tau1, 2.0 * tau2, u, v);
}

inline double l_tac(double u, double v, double sigma, double tau1, double tau2) {
  return l_tac(airy_tacnode_table(sigma), u, v, tau1, tau2);
}

// K^tac_{tau_i,tau_j}(xi, eta; sigma) through the Airy-operator kernel.
inline double tacnode_via_airy(const AiryTacnodeTable& t, double tau_i, double tau_j, double xi, double eta) {
  double c = std::cbrt(0.25), c73 = std::pow(2.0, -7.0 / 3.0);
  return c * l_tac(t, c * xi, c * eta, c73 * tau_i, c73 * tau_j);
}

}  // namespace nibm
