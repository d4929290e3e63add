#pragma once

// Quasi-eigenvalue lattices z_k = Σ hⁿ p̃ₙ(h(k + θ)) and the spectral rectangle
// they are filtered to.

#include <vector>

#include "quasispec/symbol.hpp"

namespace quasispec {

/// Cycle actions S and Maslov indices α⁰ of the Floquet condition.
struct FloquetData {
  Vec2 S{0.0, 0.0};
  IVec2 alpha0{0, 0};
};

/// θ = −S/(2πh) − α⁰/4, so that the lattice argument is ξ(k) = h(k + θ).
Vec2 floquet_shift(const FloquetData& f, double h);

/// Closed rectangle |Re z − re_center| ≤ re_half_width, |Im z/ε − F₀| ≤ im_half_width_over_eps.
struct SpectralRectangle {
  double re_half_width = 0.15;
  double im_center_over_eps = 0.0;
  double im_half_width_over_eps = 0.15;
  double re_center = 0.0;

  bool contains(cplx z, double eps) const;
  /// Normalized position: max(|Re z − c|/w_re, |Im z/ε − F₀|/w_im); ≤ 1 inside.
  double normalized_distance(cplx z, double eps) const;
  /// Same center, widths multiplied by `factor`.
  SpectralRectangle scaled(double factor) const;
  void validate() const;
};

struct LatticePoint {
  IVec2 k;
  cplx z;
};

struct LatticeResult {
  std::vector<LatticePoint> points;  ///< lexicographic in k
  int k_box = 0;                     ///< half-width of the searched index box
  IVec2 k_center{0, 0};
  double last_term_size = 0.0;       ///< max over points of |h^N p̃_N(ξ(k))|
};

/// Evaluates Σ_{n ≤ N} hⁿ p̃ₙ(ξ) for x-independent p̃ₙ.
cplx evaluate_series(const std::vector<FourierTaylorSymbol>& p_tilde, double h, const CVec2& xi);

/// Lattice points inside `rect`. k ranges over the box k_center ± k_box with
/// k_center = round(ξ*/h − θ), ξ* the real preimage of the rectangle center
/// (ξ* = 0 if Newton fails). k_box = 0 selects the smallest box whose boundary
/// shell has no point in the rectangle, enlarged by 1.5×. An explicit box
/// whose boundary shell meets the rectangle is rejected.
LatticeResult quasi_eigenvalues(const std::vector<FourierTaylorSymbol>& p_tilde, double h, const FloquetData& floquet,
                                const SpectralRectangle& rect, double eps, int k_box = 0);

std::vector<cplx> rectangle_filter(const std::vector<cplx>& z, const SpectralRectangle& rect, double eps);

}  // namespace quasispec
