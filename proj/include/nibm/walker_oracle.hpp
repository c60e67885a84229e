#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nibm/special_fn.hpp"

namespace nibm {

using BigInt = boost::multiprecision::cpp_int;

// n walkers on Z_M x Z, N steps of +-1, from the sites `starts` at time 0 to the sites `ends` at time N.
struct CylinderEnsemble {
  int M = 0, N = 0;
  std::vector<int> starts, ends;
  int n() const { return static_cast<int>(starts.size()); }
};

inline void validate(const CylinderEnsemble& ce) {
  if (ce.M < 2 || ce.M % 2 || ce.N < 0 || ce.N % 2) throw domain_error("walker_oracle: M and N must be even");
  if (ce.starts.empty() || ce.starts.size() != ce.ends.size())
    throw domain_error("walker_oracle: need equally many start and end sites");
  for (const auto* v : {&ce.starts, &ce.ends})
    for (std::size_t i = 0; i < v->size(); ++i) {
      int s = (*v)[i];
      if (s % 2 || s < -ce.M / 2 || s >= ce.M / 2) throw domain_error("walker_oracle: sites must be even in [-M/2, M/2)");
      if (i && s <= (*v)[i - 1]) throw domain_error("walker_oracle: sites must be strictly increasing");
    }
}

// Weight of nonintersecting tuples by total offset o; paths ending in a cyclic relabeling of `ends` are included.
template <class V>
struct OffsetTable {
  std::map<int, V> by_offset;
  bool cyclic_pairing = true;  // walker i always ends at ends[(i + o) mod n]
  std::size_t max_states = 0;
  V total() const {
    V s(0);
    for (const auto& [o, v] : by_offset) s += v;
    return s;
  }
};

// Transfer over lifted positions y_1 < ... < y_n < y_1 + M; each time step multiplies by step_weight^n.
template <class V>
OffsetTable<V> dp_offsets(const CylinderEnsemble& ce, V step_weight, std::size_t state_limit = 4'000'000) {
  validate(ce);
  int n = ce.n(), M = ce.M;
  using State = std::vector<int>;
  std::map<State, V> cur, next;
  cur[ce.starts] = V(1);
  OffsetTable<V> out;
  V w(1);
  for (int i = 0; i < n; ++i) w *= step_weight;
  State y(n);
  for (int t = 0; t < ce.N; ++t) {
    next.clear();
    for (const auto& [s, v] : cur)
      for (int mask = 0; mask < (1 << n); ++mask) {
        for (int i = 0; i < n; ++i) y[i] = s[i] + ((mask >> i) & 1 ? 1 : -1);
        bool ok = y[n - 1] < y[0] + M;
        for (int i = 1; i < n && ok; ++i) ok = y[i] > y[i - 1];
        if (ok) next[y] += v * w;
      }
    cur.swap(next);
    out.max_states = std::max(out.max_states, cur.size());
    if (cur.size() > state_limit) throw domain_error("walker_oracle: state space exceeds limit");
  }
  int sum_end = std::accumulate(ce.ends.begin(), ce.ends.end(), 0);
  for (const auto& [s, v] : cur) {
    std::vector<int> r(n);
    for (int i = 0; i < n; ++i) r[i] = ((s[i] + M / 2) % M + M) % M - M / 2;
    std::vector<int> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != ce.ends) continue;
    int o = (std::accumulate(s.begin(), s.end(), 0) - sum_end) / M;
    int l = ((o % n) + n) % n;
    for (int i = 0; i < n; ++i)
      if (r[i] != ce.ends[(i + l) % n]) out.cyclic_pairing = false;
    out.by_offset[o] += v;
  }
  return out;
}

// Laurent polynomial in z = e^{2 pi i tau / M} with integer coefficients.
using PhasePoly = std::map<long, BigInt>;

inline PhasePoly poly_mul(const PhasePoly& a, const PhasePoly& b) {
  PhasePoly c;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) c[i + j] += x * y;
  return c;
}

inline void poly_trim(PhasePoly& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

inline cplx poly_eval(const PhasePoly& p, double tau, int M) {
  cplx s = 0.0;
  for (const auto& [e, c] : p) s += static_cast<double>(c) * std::polar(1.0, 2.0 * pi * tau * double(e) / M);
  return s;
}

inline BigInt binomial(int N, int k) {
  if (k < 0 || k > N) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (N - k + i) / i;
  return r;
}

// Number of single-walker paths from alpha to beta + oM in N steps.
inline BigInt single_count(int alpha, int beta, int o, int M, int N) {
  int d = beta + o * M - alpha;
  if ((N + d) % 2 || std::abs(d) > N) return 0;
  return binomial(N, (N + d) / 2);
}

// Sum over offsets of single-walker counts times z^{beta - alpha + oM}.
inline PhasePoly single_poly(int alpha, int beta, int M, int N) {
  PhasePoly p;
  int omax = N / M + 2;
  for (int o = -omax; o <= omax; ++o) {
    BigInt c = single_count(alpha, beta, o, M, N);
    if (c != 0) p[beta - alpha + static_cast<long>(o) * M] += c;
  }
  return p;
}

struct LgvReport {
  PhasePoly cyclic_side, determinant_side;
  OffsetTable<BigInt> offsets;
  bool equal = false;
};

// Both sides of the offset-resolved Lindstrom-Gessel-Viennot identity, scaled by 2^{nN}:
// sum_o sgn([o mod n]) #NI_o z^{sum(beta - alpha) + oM} against det[sum_o #P_o(alpha_i; beta_j) z^{beta_j - alpha_i + oM}].
inline LgvReport km_discrete_check(const CylinderEnsemble& ce) {
  LgvReport rep;
  rep.offsets = dp_offsets<BigInt>(ce, BigInt(1));
  int n = ce.n();
  long shift = 0;
  for (int i = 0; i < n; ++i) shift += ce.ends[i] - ce.starts[i];
  for (const auto& [o, c] : rep.offsets.by_offset) {
    int l = ((o % n) + n) % n;
    BigInt sgn = (l * (n - 1)) % 2 ? -1 : 1;
    rep.cyclic_side[shift + static_cast<long>(o) * ce.M] += sgn * c;
  }
  std::vector<std::vector<PhasePoly>> E(n, std::vector<PhasePoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) E[i][j] = single_poly(ce.starts[i], ce.ends[j], ce.M, ce.N);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    PhasePoly term{{0, BigInt(inv % 2 ? -1 : 1)}};
    for (int i = 0; i < n; ++i) term = poly_mul(term, E[i][perm[i]]);
    for (const auto& [e, c] : term) rep.determinant_side[e] += c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  poly_trim(rep.cyclic_side);
  poly_trim(rep.determinant_side);
  rep.equal = rep.cyclic_side == rep.determinant_side;
  return rep;
}

// Winding histogram of closed configurations (ends = starts), normalized to probabilities.
inline std::map<int, double> dp_winding_histogram(int M, int N, const std::vector<int>& sites) {
  auto t = dp_offsets<BigInt>({M, N, sites, sites}, BigInt(1));
  BigInt tot = t.total();
  std::map<int, double> h;
  for (const auto& [o, c] : t.by_offset) {
    BigInt scaled = c * (BigInt(1) << 60) / tot;
    h[o] = std::ldexp(static_cast<double>(scaled), -60);
  }
  return h;
}

// Diffusive time matched to N steps on Z_M for n walkers.
inline double brownian_time(int n, int M, int N) { return 4.0 * pi * pi * n * N / (double(M) * M); }

// (M / 4 pi)^n times the probability that the walkers end at `ends` with no intersection (all offsets summed).
inline double scaled_reunion_density(const CylinderEnsemble& ce, std::size_t state_limit = 4'000'000) {
  auto t = dp_offsets<double>(ce, 0.5, state_limit);
  return t.total() * std::pow(ce.M / (4.0 * pi), ce.n());
}

}  // namespace nibm
