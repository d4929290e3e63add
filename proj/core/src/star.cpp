#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "quasispec/grid.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

namespace {

struct ProductPair {
  FourierTaylorSymbol a;
  FourierTaylorSymbol b;
  cplx weight;
};

std::vector<IVec2> nonzero_modes(const FourierTaylorSymbol& s) {
  std::vector<IVec2> out;
  for (int m1 = -s.K(); m1 <= s.K(); ++m1)
    for (int m2 = -s.K(); m2 <= s.K(); ++m2)
      if (!s.mode_is_zero({m1, m2})) out.push_back({m1, m2});
  return out;
}

// Upper bound for the ℓ¹ norm of the part of a·b discarded by the (K, D) caps.
double dropped_bound(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, int K, int D) {
  if (a.K() + b.K() <= K && a.D() + b.D() <= D) return 0.0;
  std::vector<double> da(static_cast<std::size_t>(a.D()) + 1, 0.0);
  std::vector<double> db(static_cast<std::size_t>(b.D()) + 1, 0.0);
  std::vector<std::pair<IVec2, double>> ma;
  std::vector<std::pair<IVec2, double>> mb;
  auto collect = [](const FourierTaylorSymbol& s, std::vector<double>& deg, std::vector<std::pair<IVec2, double>>& modes) {
    for (const IVec2& m : nonzero_modes(s)) {
      double n = 0.0;
      const auto p = s.mode(m);
      for (int j = 0; j < s.monomials(); ++j) {
        n += std::abs(p[j]);
        deg[static_cast<std::size_t>(mono::degree(j))] += std::abs(p[j]);
      }
      modes.push_back({m, n});
    }
  };
  collect(a, da, ma);
  collect(b, db, mb);
  double bound = 0.0;
  if (a.K() + b.K() > K)
    for (const auto& [m, na] : ma)
      for (const auto& [n, nb] : mb)
        if (max_abs({m[0] + n[0], m[1] + n[1]}) > K) bound += na * nb;
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < db.size(); ++j)
      if (static_cast<int>(i + j) > D) bound += da[i] * db[j];
  return bound;
}

void accumulate_direct(const ProductPair& p, FourierTaylorSymbol& out) {
  const auto table = mono::product_table(p.a.D(), p.b.D(), out.D());
  const auto ma = nonzero_modes(p.a);
  const auto mb = nonzero_modes(p.b);
  for (const IVec2& m : ma) {
    const auto pa = p.a.mode(m);
    for (const IVec2& n : mb) {
      const IVec2 t{m[0] + n[0], m[1] + n[1]};
      if (max_abs(t) > out.K()) continue;
      const auto pb = p.b.mode(n);
      auto pc = out.mode(t);
      for (const auto& e : table) pc[e.k] += p.weight * pa[e.i] * pb[e.j];
    }
  }
}

std::vector<cplx> to_grid(const FourierTaylorSymbol& s, int n) {
  const int nm = s.monomials();
  std::vector<cplx> g(static_cast<std::size_t>(n) * n * nm, cplx(0.0));
  for (int m1 = -s.K(); m1 <= s.K(); ++m1)
    for (int m2 = -s.K(); m2 <= s.K(); ++m2) {
      const auto poly = s.mode({m1, m2});
      const std::size_t base = (static_cast<std::size_t>(grid::wrap(m1, n)) * n + grid::wrap(m2, n)) * nm;
      for (int j = 0; j < nm; ++j) g[base + j] = poly[j];
    }
  grid::synthesize(g, n, nm);
  return g;
}

void accumulate_grid(const std::vector<ProductPair>& pairs, FourierTaylorSymbol& out, int n) {
  const int nc = out.monomials();
  const std::size_t points = static_cast<std::size_t>(n) * n;
  std::vector<cplx> c(points * nc, cplx(0.0));
  for (const auto& p : pairs) {
    const int na = p.a.monomials();
    const int nb = p.b.monomials();
    const auto ga = to_grid(p.a, n);
    const auto gb = to_grid(p.b, n);
    const auto table = mono::product_table(p.a.D(), p.b.D(), out.D());
    for (std::size_t q = 0; q < points; ++q) {
      const cplx* xa = &ga[q * na];
      const cplx* xb = &gb[q * nb];
      cplx* xc = &c[q * nc];
      for (const auto& e : table) xc[e.k] += xa[e.i] * xb[e.j] * p.weight;
    }
  }
  grid::analyze(c, n, nc);
  for (int m1 = -out.K(); m1 <= out.K(); ++m1)
    for (int m2 = -out.K(); m2 <= out.K(); ++m2) {
      auto poly = out.mode({m1, m2});
      const std::size_t base = (static_cast<std::size_t>(grid::wrap(m1, n)) * n + grid::wrap(m2, n)) * nc;
      for (int j = 0; j < nc; ++j) poly[j] += c[base + j];
    }
}

// Σ_p weight_p · a_p · b_p truncated to (K, D).
FourierTaylorSymbol accumulate(const std::vector<ProductPair>& pairs, int K, int D, const TruncationCaps& caps,
                               TruncationInfo* info) {
  FourierTaylorSymbol out(K, D);
  std::vector<ProductPair> live;
  double direct_cost = 0.0;
  double table_work = 0.0;
  int kin = 0;
  double fft_fields = out.monomials();
  for (const auto& p : pairs) {
    if (p.weight == cplx(0.0) || p.a.is_zero() || p.b.is_zero()) continue;
    const double t = static_cast<double>(mono::product_table(p.a.D(), p.b.D(), D).size());
    direct_cost += static_cast<double>(nonzero_modes(p.a).size() * nonzero_modes(p.b).size()) * t;
    table_work += t;
    fft_fields += p.a.monomials() + p.b.monomials();
    kin = std::max(kin, p.a.K() + p.b.K());
    if (info) info->record(std::abs(p.weight) * dropped_bound(p.a, p.b, K, D));
    live.push_back(p);
  }
  if (live.empty()) return out;

  const int n = grid::good_size(kin + K + 1);
  const double pts = static_cast<double>(n) * n;
  const double grid_cost = pts * table_work + 2.5 * pts * std::log2(pts) * fft_fields;
  if (direct_cost <= grid_cost) {
    for (const auto& p : live) accumulate_direct(p, out);
  } else {
    accumulate_grid(live, out, n);
  }
  out.canonicalize(caps.drop_threshold);
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Pairs (∂_ξ^u ∂_x^v a, ∂_x^u ∂_ξ^v b) of the n-th Weyl bidifferential operator.
void append_moyal_pairs(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, int n, cplx scale,
                        std::vector<ProductPair>& pairs) {
  const cplx base = scale * std::pow(1.0 / (2.0 * I), n);
  for (int u1 = 0; u1 <= n; ++u1)
    for (int u2 = 0; u1 + u2 <= n; ++u2)
      for (int v1 = 0; u1 + u2 + v1 <= n; ++v1) {
        const int v2 = n - u1 - u2 - v1;
        if (u1 > a.D() || u2 > a.D() || v1 > b.D() || v2 > b.D()) continue;
        if (u1 + u2 > a.D() || v1 + v2 > b.D()) continue;
        const double sign = ((v1 + v2) % 2 == 0) ? 1.0 : -1.0;
        const double denom = factorial(u1) * factorial(u2) * factorial(v1) * factorial(v2);
        auto da = derivative(a, {u1, u2}, {v1, v2});
        auto db = derivative(b, {v1, v2}, {u1, u2});
        if (da.is_zero() || db.is_zero()) continue;
        pairs.push_back({std::move(da), std::move(db), base * sign / denom});
      }
}

int capped(int v, int cap) { return std::max(0, std::min(v, cap)); }

}  // namespace

FourierTaylorSymbol multiply(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, const TruncationCaps& caps,
                             TruncationInfo* info) {
  std::vector<ProductPair> pairs{{a, b, 1.0}};
  return accumulate(pairs, capped(a.K() + b.K(), caps.max_modes), capped(a.D() + b.D(), caps.max_degree), caps, info);
}

FourierTaylorSymbol poisson_bracket(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b,
                                    const TruncationCaps& caps, TruncationInfo* info) {
  std::vector<ProductPair> pairs;
  for (int j = 0; j < 2; ++j) {
    pairs.push_back({d_xi(a, j), d_x(b, j), 1.0});
    pairs.push_back({d_x(a, j), d_xi(b, j), -1.0});
  }
  return accumulate(pairs, capped(a.K() + b.K(), caps.max_modes), capped(a.D() + b.D() - 1, caps.max_degree), caps,
                    info);
}

FourierTaylorSymbol moyal_term(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, int n,
                               const TruncationCaps& caps, TruncationInfo* info) {
  if (n < 0) throw ValidationError("moyal_term: order must be nonnegative");
  std::vector<ProductPair> pairs;
  append_moyal_pairs(a, b, n, 1.0, pairs);
  return accumulate(pairs, capped(a.K() + b.K(), caps.max_modes), capped(a.D() + b.D() - n, caps.max_degree), caps,
                    info);
}

FourierTaylorSymbol moyal_commutator_term(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, int n,
                                          const TruncationCaps& caps, TruncationInfo* info) {
  if (n % 2 == 0) return FourierTaylorSymbol(0, 0);
  return 2.0 * moyal_term(a, b, n, caps, info);
}

HSeries star_product(const HSeries& a, const HSeries& b, int N, const TruncationCaps& caps, TruncationInfo* info) {
  HSeries out(N);
  for (int n = 0; n <= N; ++n) {
    std::vector<ProductPair> pairs;
    int K = 0;
    int D = 0;
    for (int i = 0; i <= std::min(n, a.order()); ++i)
      for (int j = 0; i + j <= n && j <= b.order(); ++j) {
        const int k = n - i - j;
        append_moyal_pairs(a[i], b[j], k, 1.0, pairs);
        K = std::max(K, a[i].K() + b[j].K());
        D = std::max(D, a[i].D() + b[j].D() - k);
      }
    out[n] = accumulate(pairs, capped(K, caps.max_modes), capped(D, caps.max_degree), caps, info);
  }
  return out;
}

HSeries ad_generator(const FourierTaylorSymbol& a, int j, const HSeries& P, int N, const TruncationCaps& caps,
                     TruncationInfo* info) {
  if (j < -1) throw ValidationError("ad_generator: generator power must be >= -1");
  HSeries out(N);
  for (int o = 0; o <= N; ++o) {
    std::vector<ProductPair> pairs;
    int K = 0;
    int D = 0;
    for (int l = 0; l <= P.order(); ++l)
      for (int k = 1; l + j + k <= o; k += 2) {
        if (l + j + k != o) continue;
        append_moyal_pairs(a, P[l], k, 2.0, pairs);
        K = std::max(K, a.K() + P[l].K());
        D = std::max(D, a.D() + P[l].D() - k);
      }
    out[o] = accumulate(pairs, capped(K, caps.max_modes), capped(D, caps.max_degree), caps, info);
  }
  return out;
}

HSeries moyal_conjugation_step(const HSeries& P, const FourierTaylorSymbol& a, int j, int N,
                               const TruncationCaps& caps, TruncationInfo* info, const ConjugationOptions& opts) {
  HSeries result(N);
  for (int n = 0; n <= std::min(N, P.order()); ++n) result[n] = P[n];
  if (a.is_zero()) return result;

  // Constants are central and never feed the ad terms; leaving them out of the
  // reference norm keeps the result exactly covariant under P -> P + c.
  double scale = 0.0;
  for (const auto& t : result.terms) scale += t.norm_l1() - std::abs(t.coeff({0, 0}, {0, 0}));
  scale = std::max(scale, 1e-300);
  HSeries term = result;
  for (int k = 1; k <= opts.max_terms; ++k) {
    term = ad_generator(a, j, term, N, caps, info);
    const double inv = 1.0 / k;
    for (auto& t : term.terms) t *= inv;
    double size = 0.0;
    for (int n = 0; n <= N; ++n) {
      result[n] += term[n];
      size += term[n].norm_l1();
    }
    if (size == 0.0 || size < opts.tolerance * scale) {
      for (auto& t : result.terms) t.canonicalize(caps.drop_threshold);
      return result;
    }
  }
  throw NumericalError(fmt::format("moyal_conjugation_step: Lie series not converged after {} terms (generator "
                                   "norm {:.3e}, h-power {})",
                                   opts.max_terms, a.norm_l1(), j));
}

}  // namespace quasispec
