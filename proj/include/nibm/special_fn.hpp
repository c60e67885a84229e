#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/airy.hpp>

namespace nibm {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Which boundary value to take when an argument sits on a branch cut.
enum class Side { none = 0, upper = 1, lower = -1 };

struct EllipticPair {
  double k, K, E;
};

// Variant taking the complementary modulus kc = sqrt(1 - k^2) explicitly, accurate as k -> 1.
inline EllipticPair complete_elliptic(double k, double kc) {
  if (!(k >= 0.0 && k <= 1.0 && kc > 0.0 && kc <= 1.0)) throw domain_error("complete_elliptic: bad modulus");
  double a = 1.0, b = kc, c = k;
  double sum = 0.5 * c * c, pw = 0.5;
  for (int i = 0; i < 64; ++i) {
    double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pw *= 2.0;
    sum += pw * c * c;
    if (std::abs(c) <= 1e-17 * a) break;
  }
  double K = pi / (2.0 * a);
  return {k, K, K * (1.0 - sum)};
}

inline EllipticPair complete_elliptic(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw domain_error("complete_elliptic: k outside [0,1)");
  return complete_elliptic(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

inline double kprime(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

namespace detail {

// Carlson RF and RD by duplication; arguments in C \ (-inf,0], at most one zero.
inline cplx carlson_rf(cplx x, cplx y, cplx z) {
  for (int it = 0; it < 200; ++it) {
    cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    cplx lam = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    cplx a = (x + y + z) / 3.0;
    double dev = std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
    if (dev < 1e-3 * std::abs(a)) break;
  }
  cplx a = (x + y + z) / 3.0;
  cplx dx = (a - x) / a, dy = (a - y) / a, dz = -(dx + dy);
  cplx e2 = dx * dy - dz * dz, e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0 -
          5.0 * e2 * e2 * e2 / 208.0 + 3.0 * e3 * e3 / 104.0 + e2 * e2 * e3 / 16.0) /
         std::sqrt(a);
}

inline cplx carlson_rd(cplx x, cplx y, cplx z) {
  cplx sum = 0.0;
  double fac = 1.0;
  for (int it = 0; it < 200; ++it) {
    cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    cplx lam = sx * sy + sy * sz + sz * sx;
    sum += fac / (sz * (z + lam));
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    cplx a = (x + y + 3.0 * z) / 5.0;
    double dev = std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
    if (dev < 1e-3 * std::abs(a)) break;
  }
  cplx a = (x + y + 3.0 * z) / 5.0;
  cplx dx = (a - x) / a, dy = (a - y) / a, dz = -(dx + dy) / 3.0;
  cplx e2 = dx * dy - 6.0 * dz * dz;
  cplx e3 = (3.0 * dx * dy - 8.0 * dz * dz) * dz;
  cplx e4 = 3.0 * (dx * dy - dz * dz) * dz * dz;
  cplx e5 = dx * dy * dz * dz * dz;
  cplx s = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
           9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return 3.0 * sum + fac * s / (a * std::sqrt(a));
}

// 1 - c z^2 with the imaginary zero signed as if z were approached from `side`.
inline cplx one_minus(double c, cplx z, Side side) {
  cplx v = 1.0 - c * z * z;
  if (side != Side::none && z.imag() == 0.0 && v.real() <= 0.0) {
    double s = -static_cast<int>(side) * (z.real() >= 0 ? 1.0 : -1.0);
    v = cplx(v.real(), std::copysign(0.0, s));
  }
  return v;
}

}  // namespace detail

struct IncompleteFE {
  cplx F, E;
};

// F(z;k), E(z;k) integrated along the straight path from 0; the cuts are |Re z| > 1 on R.
inline IncompleteFE incomplete_elliptic(cplx z, double k, Side side = Side::none) {
  if (!(k >= 0.0 && k < 1.0)) throw domain_error("incomplete_elliptic: k outside [0,1)");
  if (z.imag() == 0.0 && std::abs(z.real()) > 1.0 && side == Side::none)
    throw domain_error("incomplete_elliptic: argument on a cut without side flag");
  if (z == cplx(0.0)) return {0.0, 0.0};
  cplx x = detail::one_minus(1.0, z, side);
  cplx y = detail::one_minus(k * k, z, side);
  cplx rf = detail::carlson_rf(x, y, 1.0);
  cplx F = z * rf;
  cplx E = F;
  if (k > 0.0) E -= (k * k / 3.0) * z * z * z * detail::carlson_rd(x, y, 1.0);
  return {F, E};
}

struct Theta {
  cplx th3, th4, dth3, dth4;
};

// theta_3, theta_4 with nome q and their z-derivatives; z may be complex.
inline Theta theta(cplx z, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw domain_error("theta: nome outside [0,1)");
  Theta r{1.0, 1.0, 0.0, 0.0};
  double scale = 1.0;
  for (int j = 1; j < 100000; ++j) {
    double qj = std::pow(q, double(j) * j);
    if (qj == 0.0) break;
    cplx c = std::cos(2.0 * j * z), s = std::sin(2.0 * j * z);
    double sg = (j % 2) ? -1.0 : 1.0;
    r.th3 += 2.0 * qj * c;
    r.th4 += 2.0 * sg * qj * c;
    r.dth3 -= 4.0 * j * qj * s;
    r.dth4 -= 4.0 * j * sg * qj * s;
    double mag = qj * std::cosh(2.0 * j * std::abs(z.imag())) * (1.0 + 2.0 * j);
    scale = std::max({scale, std::abs(r.th3), std::abs(r.th4)});
    if (mag < 1e-18 * scale) break;
  }
  return r;
}

inline Theta theta(double z, double q) { return theta(cplx(z, 0.0), q); }

// exp(-pi K(k') / (2 K(k)))
inline double nome_from(double k) {
  if (!(k > 0.0 && k < 1.0)) throw domain_error("nome_from: k outside (0,1)");
  return std::exp(-pi * complete_elliptic(kprime(k)).K / (2.0 * complete_elliptic(k).K));
}

// exp(-pi K(k') / K(k)), the classical nome
inline double nome_classical(double k) {
  if (!(k > 0.0 && k < 1.0)) throw domain_error("nome_classical: k outside (0,1)");
  return std::exp(-pi * complete_elliptic(kprime(k)).K / complete_elliptic(k).K);
}

// dn by the arithmetic-geometric mean scale; u is first reduced modulo the period 2K.
inline double jacobi_dn(double u, double k) {
  if (!(k >= 0.0 && k < 1.0)) throw domain_error("jacobi_dn: k outside [0,1)");
  if (k == 0.0) return 1.0;
  double K = complete_elliptic(k).K;
  u = std::abs(std::remainder(u, 2.0 * K));
  double a[40], c[40];
  a[0] = 1.0;
  double b = kprime(k);
  c[0] = k;
  int N = 0;
  while (N < 38 && std::abs(c[N]) > 1e-16) {
    a[N + 1] = 0.5 * (a[N] + b);
    c[N + 1] = 0.5 * (a[N] - b);
    b = std::sqrt(a[N] * b);
    ++N;
  }
  double phi = std::ldexp(a[N] * u, N), prev = phi;
  for (int n = N; n > 0; --n) {
    prev = phi;
    phi = 0.5 * (phi + std::asin(c[n] / a[n] * std::sin(phi)));
  }
  if (std::abs(std::cos(phi)) > 0.5) return std::cos(phi) / std::cos(prev - phi);
  double sn = std::sin(phi);
  return std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
}

// Z(u;k) = E(u;k) - (E/K) F(u;k), u in the sin-amplitude convention.
inline cplx jacobi_zeta(cplx u, double k, Side side = Side::none) {
  auto ce = complete_elliptic(k);
  auto fe = incomplete_elliptic(u, k, side);
  return fe.E - (ce.E / ce.K) * fe.F;
}

// Lambda_0 with x = sin(phi).
inline double heuman_lambda(double x, double k) {
  if (!(x >= 0.0 && x <= 1.0) || !(k > 0.0 && k < 1.0))
    throw domain_error("heuman_lambda: argument out of range");
  auto ce = complete_elliptic(k);
  auto fe = incomplete_elliptic(cplx(x, 0.0), kprime(k));
  double v = 2.0 / pi * (ce.K * fe.E.real() + (ce.E - ce.K) * fe.F.real());
  return std::clamp(v, 0.0, 1.0);
}

struct AiryPair {
  double ai, aip;
};

inline AiryPair airy(double x) { return {boost::math::airy_ai(x), boost::math::airy_ai_prime(x)}; }

}  // namespace nibm
