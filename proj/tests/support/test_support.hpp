#pragma once

#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "quasispec/symbol.hpp"

namespace qs_test {

using quasispec::cplx;
using quasispec::FourierTaylorSymbol;
using quasispec::IVec2;

inline FourierTaylorSymbol random_symbol(std::mt19937& rng, int K, int D, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  FourierTaylorSymbol s(K, D);
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      for (int a1 = 0; a1 <= D; ++a1)
        for (int a2 = 0; a1 + a2 <= D; ++a2)
          if (keep(rng) < density) s.set({m1, m2}, {a1, a2}, cplx(u(rng), u(rng)));
  return s;
}

// Plain (m, α)-keyed convolution, independent of the library's product engine.
inline std::map<std::tuple<int, int, int, int>, cplx> naive_product(const FourierTaylorSymbol& a,
                                                                    const FourierTaylorSymbol& b, int K, int D) {
  std::map<std::tuple<int, int, int, int>, cplx> out;
  a.for_each([&](IVec2 m, IVec2 al, cplx ca) {
    b.for_each([&](IVec2 n, IVec2 be, cplx cb) {
      const int t1 = m[0] + n[0];
      const int t2 = m[1] + n[1];
      if (std::abs(t1) > K || std::abs(t2) > K || al[0] + al[1] + be[0] + be[1] > D) return;
      out[{t1, t2, al[0] + be[0], al[1] + be[1]}] += ca * cb;
    });
  });
  return out;
}

inline double max_deviation(const FourierTaylorSymbol& s, const std::map<std::tuple<int, int, int, int>, cplx>& ref) {
  double d = 0.0;
  for (const auto& [k, c] : ref) {
    const auto [m1, m2, a1, a2] = k;
    d = std::max(d, std::abs(s.coeff({m1, m2}, {a1, a2}) - c));
  }
  s.for_each([&](IVec2 m, IVec2 al, cplx c) {
    if (!ref.count({m[0], m[1], al[0], al[1]})) d = std::max(d, std::abs(c));
  });
  return d;
}

inline double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// h^N coefficient of e^{im·x}f(ξ) # e^{in·x}g(ξ) = e^{i(m+n)·x} f(ξ + hn/2) g(ξ − hm/2),
// for single-monomial f = ξ^α, g = ξ^β (Taylor expansion of the shifted product).
inline std::map<std::tuple<int, int, int, int>, cplx> shifted_product_oracle(IVec2 m, IVec2 al, cplx ca, IVec2 n,
                                                                             IVec2 be, cplx cb, int N) {
  std::map<std::tuple<int, int, int, int>, cplx> out;
  // (ξ_j + h n_j/2)^{α_j} = Σ_r C(α_j, r) ξ_j^{α_j−r} (h n_j/2)^r, similarly for g with −m/2.
  for (int r1 = 0; r1 <= al[0]; ++r1)
    for (int r2 = 0; r2 <= al[1]; ++r2)
      for (int s1 = 0; s1 <= be[0]; ++s1)
        for (int s2 = 0; s2 <= be[1]; ++s2) {
          if (r1 + r2 + s1 + s2 != N) continue;
          const double c = binom(al[0], r1) * binom(al[1], r2) * binom(be[0], s1) * binom(be[1], s2) *
                           std::pow(n[0] / 2.0, r1) * std::pow(n[1] / 2.0, r2) * std::pow(-m[0] / 2.0, s1) *
                           std::pow(-m[1] / 2.0, s2);
          if (c == 0.0) continue;
          out[{m[0] + n[0], m[1] + n[1], al[0] - r1 + be[0] - s1, al[1] - r2 + be[1] - s2}] += c * ca * cb;
        }
  return out;
}

}  // namespace qs_test
