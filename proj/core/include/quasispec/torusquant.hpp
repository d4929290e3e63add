#pragma once

// Weyl quantization of h-series symbols on T² in the Floquet basis
// e_k(x) = exp(i x·(k + θ)), |k₁|, |k₂| ≤ M, and dense diagonalization.

#include <Eigen/Dense>
#include <vector>

#include "quasispec/lattice.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

struct QuantizationWindow {
  int M = 8;
  Vec2 theta{0.0, 0.0};  ///< reduced to [0, 1) by make_window
  double h = 0.1;

  int side() const { return 2 * M + 1; }
  int dimension() const { return side() * side(); }
  int index(IVec2 k) const { return (k[0] + M) * side() + (k[1] + M); }
  IVec2 mode(int idx) const { return {idx / side() - M, idx % side() - M}; }
};

inline constexpr int kDefaultMaxDimension = 4096;

/// Window with θ = −S/(2πh) − α⁰/4 reduced mod 1.
QuantizationWindow make_window(int M, double h, const FloquetData& floquet);

/// ⟨e_l | Op(P) | e_k⟩ = Σₙ hⁿ p̂ₙ,ₗ₋ₖ(h((k + l)/2 + θ)); rows and columns
/// lexicographic in k. Throws if a symbol couples modes further than 2M.
Eigen::MatrixXcd weyl_matrix(const HSeries& P, const QuantizationWindow& w,
                             int max_dimension = kDefaultMaxDimension);

/// All eigenvalues (LAPACK zgeev), sorted by (Re, Im).
std::vector<cplx> eigs(const Eigen::MatrixXcd& A);

struct TrustReport {
  bool pass = false;
  /// min over the outer band of normalized_distance(P₀ diagonal)/2 − 1; > 0 on pass.
  double margin = 0.0;
  int band_width = 0;
};

/// Checks that the diagonal estimate P₀(h(k + θ)) on the outer 25% band of
/// the window lies outside the rectangle inflated 2× in both widths.
TrustReport trusted_window(const HSeries& P, const QuantizationWindow& w, const SpectralRectangle& rect, double eps);

/// Smallest M whose window passes trusted_window and holds the symbol's
/// couplings, with dimension ≤ max_dimension. Throws NumericalError if none.
int auto_window_size(const HSeries& P, double h, const FloquetData& floquet, const SpectralRectangle& rect,
                     double eps, int max_dimension = kDefaultMaxDimension);

struct OracleSpectrum {
  std::vector<cplx> eigenvalues;  ///< every eigenvalue of the window matrix
  QuantizationWindow window;
  SpectralRectangle trusted_rectangle;
  TrustReport trust;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Assembles, diagonalizes and trust-checks; untrusted windows raise NumericalError.
OracleSpectrum oracle_spectrum(const HSeries& P, const QuantizationWindow& w, const SpectralRectangle& rect,
                               double eps, int max_dimension = kDefaultMaxDimension);

}  // namespace quasispec
