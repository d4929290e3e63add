#pragma once

// Truncated Fourier–Taylor symbols on T*T²:
//
//   a(x, ξ) = Σ_{|m₁|,|m₂| ≤ K, |α| ≤ D} c_{m,α} e^{i m·x} ξ^α
//
// together with their h-series and the Weyl symbol calculus acting on them.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "quasispec/common.hpp"
#include "quasispec/monomial.hpp"

namespace quasispec {

/// Degree caps applied by every bilinear operation.
struct TruncationCaps {
  int max_modes = 8;             ///< K cap on |m₁|, |m₂|
  int max_degree = 6;            ///< D cap on |α|
  double drop_threshold = 1e-30; ///< coefficients below this are removed
};

/// Truncation metadata. `dropped_bound` is an upper bound for the ℓ¹ norm of
/// everything discarded by the caps, accumulated over the recorded operations.
struct TruncationInfo {
  std::size_t events = 0;
  double dropped_bound = 0.0;

  void record(double bound) {
    if (bound > 0.0) {
      ++events;
      dropped_bound += bound;
    }
  }
  void merge(const TruncationInfo& other) {
    events += other.events;
    dropped_bound += other.dropped_bound;
  }
  bool truncated() const { return events > 0; }
};

class FourierTaylorSymbol {
 public:
  FourierTaylorSymbol() : FourierTaylorSymbol(0, 0) {}
  FourierTaylorSymbol(int K, int D);

  static FourierTaylorSymbol constant(cplx c);
  /// Single term c e^{i m·x} ξ^α with the tightest bounds.
  static FourierTaylorSymbol term(IVec2 m, IVec2 alpha, cplx c);

  int K() const { return K_; }
  int D() const { return D_; }
  int side() const { return 2 * K_ + 1; }
  int monomials() const { return nmono_; }

  bool contains(IVec2 m, IVec2 alpha) const {
    return max_abs(m) <= K_ && alpha[0] >= 0 && alpha[1] >= 0 && alpha[0] + alpha[1] <= D_;
  }

  /// Zero for keys outside the bounds.
  cplx coeff(IVec2 m, IVec2 alpha) const;
  void set(IVec2 m, IVec2 alpha, cplx c);
  void add(IVec2 m, IVec2 alpha, cplx c);

  /// Coefficients of the ξ-polynomial attached to mode m (length monomials()).
  std::span<const cplx> mode(IVec2 m) const;
  std::span<cplx> mode(IVec2 m);
  bool mode_is_zero(IVec2 m) const;

  std::span<const cplx> raw() const { return c_; }
  std::span<cplx> raw() { return c_; }

  bool is_zero() const;
  /// True iff every nonzero coefficient sits at m = 0.
  bool is_x_independent() const;
  std::size_t nnz() const;

  /// Calls f(IVec2 m, IVec2 alpha, cplx c) for every nonzero coefficient in
  /// lexicographic (m₁, m₂, index(α)) order.
  template <class F>
  void for_each(F&& f) const {
    for (int i1 = 0; i1 < side(); ++i1)
      for (int i2 = 0; i2 < side(); ++i2) {
        const std::size_t base = (static_cast<std::size_t>(i1) * side() + i2) * nmono_;
        for (int j = 0; j < nmono_; ++j) {
          const cplx c = c_[base + j];
          if (c != cplx(0.0)) f(IVec2{i1 - K_, i2 - K_}, mono::exponent(j), c);
        }
      }
  }

  /// Copy with new bounds; coefficients outside are dropped (and reported).
  FourierTaylorSymbol with_bounds(int K, int D, TruncationInfo* info = nullptr) const;
  /// Smallest bounds holding every nonzero coefficient.
  FourierTaylorSymbol tightened() const;

  /// Zeroes coefficients with |c| < threshold (canonical sparse form).
  void canonicalize(double threshold);

  double norm_l1() const;
  double norm_max() const;
  /// Σ |c| r^{|α|}: bounds sup |a| over T² × {|ξ_j| ≤ r}.
  double norm_weighted(double r) const;

  /// a(x, ξ) at real x and complex ξ.
  cplx operator()(const Vec2& x, const CVec2& xi) const;
  /// The ξ-polynomial of mode m evaluated at ξ.
  cplx mode_value(IVec2 m, const CVec2& xi) const;

  FourierTaylorSymbol& operator+=(const FourierTaylorSymbol& o);
  FourierTaylorSymbol& operator-=(const FourierTaylorSymbol& o);
  FourierTaylorSymbol& operator*=(cplx s);

  friend bool operator==(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b);

 private:
  std::size_t offset(IVec2 m) const {
    return (static_cast<std::size_t>(m[0] + K_) * side() + (m[1] + K_)) * nmono_;
  }

  int K_;
  int D_;
  int nmono_;
  std::vector<cplx> c_;
};

FourierTaylorSymbol operator+(FourierTaylorSymbol a, const FourierTaylorSymbol& b);
FourierTaylorSymbol operator-(FourierTaylorSymbol a, const FourierTaylorSymbol& b);
FourierTaylorSymbol operator-(FourierTaylorSymbol a);
FourierTaylorSymbol operator*(cplx s, FourierTaylorSymbol a);
FourierTaylorSymbol operator*(FourierTaylorSymbol a, cplx s);

/// Largest coefficient difference over the union of supports.
double max_difference(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b);

// ---------------------------------------------------------------------------
// Calculus.

FourierTaylorSymbol d_x(const FourierTaylorSymbol& a, int j);
FourierTaylorSymbol d_xi(const FourierTaylorSymbol& a, int j);
/// ∂_ξ^u ∂_x^v a for multi-indices u, v.
FourierTaylorSymbol derivative(const FourierTaylorSymbol& a, IVec2 u_xi, IVec2 v_x);

/// Pointwise product, truncated to (min(K_a+K_b, cap), min(D_a+D_b, cap)).
FourierTaylorSymbol multiply(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b,
                             const TruncationCaps& caps = {}, TruncationInfo* info = nullptr);

/// {a, b} = ∂_ξa·∂_xb − ∂_xa·∂_ξb.
FourierTaylorSymbol poisson_bracket(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b,
                                    const TruncationCaps& caps = {}, TruncationInfo* info = nullptr);

/// h^n coefficient of the Weyl product a#b:
///   (1/2i)^n Σ_{|u|+|v|=n} (−1)^{|v|}/(u! v!) (∂_ξ^u ∂_x^v a)(∂_x^u ∂_ξ^v b).
FourierTaylorSymbol moyal_term(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b, int n,
                               const TruncationCaps& caps = {}, TruncationInfo* info = nullptr);

/// h^n coefficient of a#b − b#a (zero for even n).
FourierTaylorSymbol moyal_commutator_term(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b,
                                          int n, const TruncationCaps& caps = {},
                                          TruncationInfo* info = nullptr);

/// The x-independent g with f·g = 1 + O(ξ^{D+1}). Throws NumericalError when
/// |f(0)| < floor.
FourierTaylorSymbol taylor_reciprocal(const FourierTaylorSymbol& f, int D, double floor = 1e-14);

// ---------------------------------------------------------------------------
// h-series.

/// Truncated formal power series Σ_{n ≤ N} h^n P_n.
struct HSeries {
  std::vector<FourierTaylorSymbol> terms;

  HSeries() = default;
  explicit HSeries(int order) : terms(static_cast<std::size_t>(order) + 1) {}
  explicit HSeries(std::vector<FourierTaylorSymbol> t) : terms(std::move(t)) {}
  HSeries(std::initializer_list<FourierTaylorSymbol> t) : terms(t) {}

  int order() const { return static_cast<int>(terms.size()) - 1; }
  FourierTaylorSymbol& operator[](int n) { return terms.at(static_cast<std::size_t>(n)); }
  const FourierTaylorSymbol& operator[](int n) const { return terms.at(static_cast<std::size_t>(n)); }

  int max_K() const;
  int max_D() const;
  double norm_l1() const;
  /// Pads every term to the same (K, D) bounds.
  void uniformize();
};

/// (A#B) truncated at h^N.
HSeries star_product(const HSeries& a, const HSeries& b, int N, const TruncationCaps& caps = {},
                     TruncationInfo* info = nullptr);

/// h^j·(a#P − P#a) for a generator a entering at h-power j ≥ −1, truncated at h^N.
HSeries ad_generator(const FourierTaylorSymbol& a, int j, const HSeries& P, int N,
                     const TruncationCaps& caps = {}, TruncationInfo* info = nullptr);

struct ConjugationOptions {
  double tolerance = 1e-17;  ///< Lie series stops once a term's ℓ¹ norm falls below tolerance·‖P‖
  int max_terms = 80;
};

/// e^{ad_{h^j a}} P truncated at h^N (the symbol of e^{A} P e^{−A}, A = h^j Op(a)).
HSeries moyal_conjugation_step(const HSeries& P, const FourierTaylorSymbol& a, int j, int N,
                               const TruncationCaps& caps = {}, TruncationInfo* info = nullptr,
                               const ConjugationOptions& opts = {});

}  // namespace quasispec
