#pragma once

// Complex eiconal equation p_ε(x, ζ + ∇φ) = z(ζ) on T², solved for
// grad-periodic φ = ε̃ψ with ψ = ψ_per + aα + bβ by a spectral fixed point.
//
// Notation. z(ζ) is the x-mean of p_ε at ζ and c = ∇_ξ z(ζ). With
// Z = c₁∂₁ + c₂∂₂ the linear directions are
//   α = (c₂/i) x₁ + i c₁ x₂   (Zα = 0),
//   β = (c₂/i) x₁ − i c₁ x₂   (Zβ = −2i c₁c₂).
// For p = ξ₁, ⟨q⟩ = ξ₂ this is c = (1, iε), α = εx₁ + ix₂, β = εx₁ − ix₂.

#include <optional>
#include <string>
#include <vector>

#include "quasispec/models.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

struct EiconalOptions {
  double tolerance = 1e-12;  ///< on the weighted correction norm
  int max_iterations = 200;
  double sobolev_s = 2.0;    ///< weight ⟨k⟩^s in the correction norm
  int stall_steps = 3;       ///< consecutive ratios ≥ 1 before giving up
};

class EiconalProblem {
 public:
  /// `grid` = 0 picks the smallest power of two ≥ max(4K, 16); eps_tilde = 0 means √ε.
  EiconalProblem(FourierTaylorSymbol p_eps, double eps, double eps_tilde = 0.0, int grid = 0, CVec2 zeta = {0.0, 0.0});

  /// p_ε from a model: with `averaged`, (p + iεq + ε²r)∘exp(iεH_G) = p + iε⟨q⟩ + O(ε²);
  /// otherwise the raw p + iεq + ε²r.
  static EiconalProblem from_model(const Model& model, double eps, double eps_tilde = 0.0, bool averaged = true,
                                   const TruncationCaps& caps = {8, 10, 1e-30}, int grid = 0);

  /// Same symbol and scales, recentered at ζ.
  EiconalProblem recentered(CVec2 zeta) const;
  /// Same symbol and center, different ε̃.
  EiconalProblem with_eps_tilde(double eps_tilde) const;

  const FourierTaylorSymbol& symbol() const { return p_; }
  double eps() const { return eps_; }
  double eps_tilde() const { return eps_tilde_; }
  int grid() const { return n_; }
  const CVec2& zeta() const { return zeta_; }

  cplx z() const { return z_; }
  const CVec2& c() const { return c_; }
  CVec2 grad_alpha() const { return {c_[1] / I, I * c_[0]}; }
  CVec2 grad_beta() const { return {c_[1] / I, -I * c_[0]}; }
  cplx z_beta() const { return -2.0 * I * c_[0] * c_[1]; }

  /// Values of G(x, w) = F(x, ε̃w)/ε̃ at the points of the 2n evaluation grid,
  /// F(x, ξ) = p_ε(x, ζ+ξ) − z − c·ξ. `w` holds two interleaved components.
  void nonlinearity(const std::vector<cplx>& w, std::vector<cplx>& out) const;
  int eval_grid() const { return 2 * n_; }

 private:
  void prepare();

  FourierTaylorSymbol p_;
  double eps_;
  double eps_tilde_;
  int n_;
  CVec2 zeta_;
  cplx z_{};
  CVec2 c_{};
  int nmono_ = 0;
  std::vector<cplx> fields_;  ///< (2n)² × nmono, ε̃^{|β|−1} F_β(x)
};

struct EiconalSolution {
  int grid = 0;
  std::vector<cplx> psi_per;  ///< n×n Fourier coefficients (storage index k mod n), zero mean
  cplx a{};
  cplx b{};
  double residual = 0.0;      ///< sup |p_ε(x, ζ + ε̃∇ψ) − z| on the doubled grid
  int iterations = 0;
  std::vector<double> corrections;  ///< weighted norm of each step's correction
  double contraction = 0.0;         ///< largest ratio of successive corrections above the noise floor
  double bound = 0.0;               ///< |b| + sup_k ⟨k⟩^s |(k₁/ε, k₂)| |ψ̂_per(k)|
  double decay_rate = 0.0;          ///< fitted exponential decay rate of |ψ̂_per| over |k|_∞ shells
  double tail = 0.0;                ///< largest |ψ̂_per| on the outermost kept shell

  cplx coeff(int k1, int k2) const;
  /// ∇ψ_per at a real point, by direct trigonometric summation.
  CVec2 grad_per(const Vec2& x) const;
  cplx value_per(const Vec2& x) const;
};

/// û(k) = v̂(k)/(ik₁ − εk₂) for grid values v on an n×n grid; the mean of v must vanish.
std::vector<cplx> solve_linearized(const std::vector<cplx>& v, int n, double eps);

/// sup_k ⟨k⟩^s |(k₁/ε, k₂)| |û(k)| for n×n Fourier coefficients.
double weighted_norm(const std::vector<cplx>& coeffs, int n, double eps, double s);

/// The fixed point ψ^{(j)} ↦ ψ^{(j+1)} with Zψ^{(j+1)} + G(x, ∇ψ^{(j)}) = 0 and a held fixed.
EiconalSolution iterate_schema(const EiconalProblem& problem, cplx a, const EiconalOptions& opts = {});

struct Actions {
  cplx I1;
  cplx I2;
  double quadrature_mismatch = 0.0;
};

/// Cycle actions of Γ: ξ = ζ + ε̃∇ψ. Closed form
///   I₁ = 2π ε̃ (c₂/i)(a + b) + 2πζ₁,   I₂ = 2π ε̃ i c₁ (a − b) + 2πζ₂,
/// cross-checked by Gauss–Legendre quadrature of ξ·dx along shifted cycles.
Actions compute_actions(const EiconalSolution& sol, const EiconalProblem& problem);

struct Realified {
  cplx a_star;
  EiconalSolution solution;
  Actions actions;
  int newton_steps = 0;
};

/// Newton on (Re a, Im a) making both actions real.
Realified realify_actions(const EiconalProblem& problem, const EiconalOptions& opts = {}, double fd_step = 1e-6,
                          int max_steps = 20);

struct FamilyPoint {
  Vec2 eta{};
  CVec2 zeta{};
  cplx p_tilde{};
  std::optional<EiconalSolution> solution;
  std::optional<std::string> error;
};

/// For each η: a = 0 and ζ solving ζ + ε̃b(ζ)∇β(ζ) = η; then p̃_ε(η) = z(ζ) and
/// φ(x, η) = x·η + ε̃ψ_per(x, ζ).
std::vector<FamilyPoint> solve_family(const EiconalProblem& base, const std::vector<Vec2>& etas,
                                      const EiconalOptions& opts = {}, int workers = 1);
FamilyPoint solve_family_point(const EiconalProblem& base, const Vec2& eta, const EiconalOptions& opts = {});

struct Displacement {
  double dx = 0.0;    ///< sup |x − y|
  double dxi1 = 0.0;  ///< sup |ξ₁ − η₁|
  double dxi2 = 0.0;  ///< sup |ξ₂ − η₂|
};

/// κ_ε(y, η) = (x, φ_x) with y = φ_η(x, η), sampled on an m×m grid of x; φ_η by central differences.
Displacement kappa_displacement(const EiconalProblem& base, const Vec2& eta, const EiconalOptions& opts = {},
                                double fd_step = 1e-5, int samples = 8);

}  // namespace quasispec
