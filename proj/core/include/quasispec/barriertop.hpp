#pragma once

// Barrier-top saddles with resonant frequencies: averaging of the cubic term
// along the harmonic flow, the ε-rescaling of the rotated operator, and the
// resulting resonance lattice E₀ − iε²z.

#include <optional>
#include <string>
#include <vector>

#include "quasispec/birkhoff.hpp"
#include "quasispec/lattice.hpp"
#include "quasispec/phase_polynomial.hpp"

namespace quasispec {

/// p − E₀ = Σ λⱼ/2 (ξⱼ² − xⱼ²) + p₃(x) + … near the saddle.
struct ResonantSaddle {
  Vec2 lambdas{1.0, 1.0};
  std::optional<IVec2> k_res;
  PhasePolynomial p3;  ///< homogeneous cubic in x only
  double E0 = 0.0;

  void validate() const;
};

/// p₂ = Σ λⱼ/2 (ξⱼ² + xⱼ²).
PhasePolynomial harmonic_p2(const Vec2& lambdas);

/// λ = ω·(n₁, n₂) with coprime positive integers; throws ValidationError when
/// no such pair with nⱼ ≤ max_denominator matches to 1e-12.
struct Commensuration {
  double omega;
  IVec2 n;
  double period() const { return 2.0 * kPi / omega; }
};
Commensuration commensurate(const Vec2& lambdas, int max_denominator = 10000);

/// Average along zⱼ(t) = e^{−iλⱼt}zⱼ, zⱼ = xⱼ + iξⱼ: z^a z̄^b survives iff λ·(a − b) = 0.
PhasePolynomial harmonic_average(const PhasePolynomial& poly, const Vec2& lambdas);

/// (1/T)∫₀ᵀ poly(flow_t(ρ)) dt by Gauss–Legendre quadrature over one period.
cplx average_by_quadrature(const PhasePolynomial& poly, const Vec2& lambdas, const PhasePoint& rho, int nodes = 512);

/// The ε-rescaled problem in the rotated variables:
/// ε⁻²q(εy, εη) = p₂(y, η) + iε e^{3πi/4}⟨p₃⟩(y, η) + O(ε²), h̃ = h/ε².
struct ReducedProblem {
  double eps = 0.0;
  double h = 0.0;
  double h_tilde = 0.0;
  Vec2 lambdas{};
  double E0 = 0.0;
  PhasePolynomial p2;
  PhasePolynomial averaged_p3;    ///< ⟨p₃⟩
  PhasePolynomial perturbation;   ///< iε e^{3πi/4}⟨p₃⟩
  std::string remainder = "O(eps^2)";
  std::vector<std::string> warnings;
};

ReducedProblem rescale(const ResonantSaddle& saddle, double eps, double h);

struct RescaleInputs {
  double eps;
  double h;
  PhasePolynomial averaged_p3;
};
/// Undoes the scaling on an emitted record.
RescaleInputs rescale_inverse(const ReducedProblem& reduced);

struct Resonance {
  IVec2 k;
  cplx z;
  cplx E;  ///< E₀ − iε²z
};

/// Lattice of z = Σ h̃ⁿ p̃ₙ(h̃(k − α⁰/4) − S/2π) in `rect`, mapped to E₀ − iε²z.
/// `p_tilde` is the normal form in the action chart of the reduced problem.
std::vector<Resonance> resonance_lattice(const ReducedProblem& reduced, const std::vector<FourierTaylorSymbol>& p_tilde,
                                         const FloquetData& floquet, const SpectralRectangle& rect);
std::vector<Resonance> resonance_lattice(const ReducedProblem& reduced, const NormalFormResult& nf,
                                         const FloquetData& floquet, const SpectralRectangle& rect);

}  // namespace quasispec
