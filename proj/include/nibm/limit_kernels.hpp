#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nibm/airy_tacnode.hpp"
#include "nibm/painleve.hpp"
#include "nibm/quadrature.hpp"
#include "nibm/special_fn.hpp"

namespace nibm {

struct KernelValue {
  cplx value;
  double counterterm = 0.0;
  double quad_estimate = 0.0;
};

// Nodes z_k and complex weights dz_k along a polyline, each leg split into panels of m Gauss-Legendre points.
struct ContourRule {
  std::vector<cplx> z, dz;
};

inline void append_leg(ContourRule& r, cplx a, cplx b, int panels, int m) {
  auto g = composite_gl(0.0, 1.0, panels, m);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    r.z.push_back(a + (b - a) * g.x[i]);
    r.dz.push_back((b - a) * g.w[i]);
  }
}

inline ContourRule polyline_rule(const std::vector<cplx>& pts, const std::vector<int>& panels, int m = 20) {
  ContourRule r;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) append_leg(r, pts[i], pts[i + 1], panels[i], m);
  return r;
}

namespace detail {

// Sigma_P: upper part e^{i pi/4} inf -> c + ci -> -c + ci -> e^{3 i pi/4} inf, lower part its mirror image.
inline ContourRule pearcey_sigma(double R, int panels, double c = 2.0) {
  cplx e1 = std::polar(R, pi / 4), e3 = std::polar(R, 3 * pi / 4);
  int pr = static_cast<int>(std::ceil(panels * (R - c * std::sqrt(2.0)) / 4.0));
  auto up = polyline_rule({e1, cplx(c, c), cplx(-c, c), e3}, {pr, panels, pr});
  auto lo = polyline_rule({std::conj(e3), cplx(-c, -c), cplx(c, -c), std::conj(e1)}, {pr, panels, pr});
  up.z.insert(up.z.end(), lo.z.begin(), lo.z.end());
  up.dz.insert(up.dz.end(), lo.dz.begin(), lo.dz.end());
  return up;
}

// Gamma_P: the leftward line Im w = h.
inline ContourRule pearcey_gamma(double R, int panels, double h = 1.0) {
  return polyline_rule({cplx(R, h), cplx(-R, h)}, {static_cast<int>(std::ceil(panels * R / 2.0))});
}

inline cplx pearcey_sum(double s, double t, double xi, double eta, const ContourRule& S, const ContourRule& G) {
  const cplx I(0.0, 1.0);
  std::vector<cplx> F(S.z.size()), H(G.z.size());
  for (std::size_t k = 0; k < S.z.size(); ++k) {
    cplx z = S.z[k], z2 = z * z;
    F[k] = std::exp(z2 * z2 / 4.0 + s * z2 / 2.0 + I * xi * z) * S.dz[k];
  }
  for (std::size_t l = 0; l < G.z.size(); ++l) {
    cplx w = G.z[l], w2 = w * w;
    H[l] = std::exp(-(w2 * w2 / 4.0 + t * w2 / 2.0 + I * eta * w)) * G.dz[l];
  }
  cplx acc = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    cplx row = 0.0;
    for (std::size_t l = 0; l < H.size(); ++l) row += H[l] / (S.z[k] - G.z[l]);
    acc += F[k] * row;
  }
  return I / (4.0 * pi * pi) * acc;
}

}  // namespace detail

struct PearceyOptions {
  double truncation = 8.0;
  int panels = 8;
  double sigma_corner = 2.0;
  double gamma_height = 1.0;
};

// Extended Pearcey kernel K^P_{s,t}(xi, eta) = K~^P - phi_{s,t}; the estimate is the change under panel doubling.
inline KernelValue pearcey_kernel(double s, double t, double xi, double eta, const PearceyOptions& o = {}) {
  auto eval = [&](int p) {
    return detail::pearcey_sum(s, t, xi, eta, detail::pearcey_sigma(o.truncation, p, o.sigma_corner),
                               detail::pearcey_gamma(o.truncation, p, o.gamma_height));
  };
  cplx a = eval(o.panels), b = eval(2 * o.panels);
  double phi = gaussian_phi(s, t, xi, eta);
  return {b - phi, phi, std::abs(b - a)};
}

// f, g on the tacnode contour Sigma_T (u nodes) and on a copy pushed off it by +-offset i (v nodes), for one sigma.
struct TacnodeTable {
  double sigma = 0.0;
  ContourRule u, v;
  std::vector<cplx> fu, gu, fv, gv;
};

namespace detail {

inline ContourRule tacnode_sigma(double R, int panels, double shift) {
  cplx a = std::polar(R, pi / 6), b(std::sqrt(3.0), 1.0), s(0.0, shift);
  cplx a2 = std::polar(R, 5 * pi / 6), b2(-std::sqrt(3.0), 1.0);
  auto up = polyline_rule({a + s, b + s, b2 + s, a2 + s}, {panels, panels, panels});
  auto lo = polyline_rule({std::conj(a2 + s), std::conj(b2 + s), std::conj(b + s), std::conj(a + s)},
                          {panels, panels, panels});
  up.z.insert(up.z.end(), lo.z.begin(), lo.z.end());
  up.dz.insert(up.dz.end(), lo.dz.begin(), lo.dz.end());
  return up;
}

}  // namespace detail

inline TacnodeTable tacnode_table(double sigma, const HMSolution& hm, int panels = 4, double R = 6.0,
                                  double offset = 0.4) {
  TacnodeTable t;
  t.sigma = sigma;
  t.u = detail::tacnode_sigma(R, panels, 0.0);
  t.v = detail::tacnode_sigma(R, panels, offset);
  auto fill = [&](const ContourRule& c, std::vector<cplx>& f, std::vector<cplx>& g) {
    f.resize(c.z.size());
    g.resize(c.z.size());
    for (std::size_t k = 0; k < c.z.size(); ++k) {
      auto fg = f_g(c.z[k], sigma, hm);
      f[k] = fg.f;
      g[k] = fg.g;
    }
  };
  fill(t.u, t.fu, t.gu);
  fill(t.v, t.fv, t.gv);
  return t;
}

// K~^tac by the double contour sum; v runs on the displaced contour, which leaves the integral unchanged since the
// integrand is analytic across u = v.
inline cplx tacnode_tilde(const TacnodeTable& t, double tau_i, double tau_j, double xi, double eta) {
  const cplx I(0.0, 1.0);
  std::vector<cplx> a(t.v.z.size()), b(t.v.z.size());
  for (std::size_t l = 0; l < t.v.z.size(); ++l) {
    cplx v = t.v.z[l], e = std::exp(-tau_j * v * v / 2.0 + I * v * eta) * t.v.dz[l];
    a[l] = t.gv[l] * e;
    b[l] = t.fv[l] * e;
  }
  cplx acc = 0.0;
  for (std::size_t k = 0; k < t.u.z.size(); ++k) {
    cplx u = t.u.z[k], e = std::exp(tau_i * u * u / 2.0 - I * u * xi) * t.u.dz[k], row = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) row += (t.fu[k] * a[l] - t.gu[k] * b[l]) / (u - t.v.z[l]);
    acc += e * row;
  }
  return acc / (2.0 * pi * 2.0 * pi * I);
}

inline cplx tacnode_value(const TacnodeTable& t, double tau_i, double tau_j, double xi, double eta) {
  return tacnode_tilde(t, tau_i, tau_j, xi, eta) - gaussian_phi(tau_i, tau_j, xi, eta);
}

// K^tac_{tau_i,tau_j}(xi, eta; sigma); the estimate is the change under panel doubling.
inline KernelValue tacnode_kernel(double tau_i, double tau_j, double xi, double eta, double sigma, const HMSolution& hm,
                                  int panels = 4) {
  auto a = tacnode_value(tacnode_table(sigma, hm, panels), tau_i, tau_j, xi, eta);
  auto b = tacnode_value(tacnode_table(sigma, hm, 2 * panels), tau_i, tau_j, xi, eta);
  return {b, gaussian_phi(tau_i, tau_j, xi, eta), std::abs(b - a)};
}

}  // namespace nibm
