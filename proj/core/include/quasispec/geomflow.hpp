#pragma once

// Hamilton flows in the normal-form chart: trajectory averages, the
// conjugation weight G with H_pG = q − ⟨q⟩, and numerical checks of the
// action/period identities on closed orbits.

#include <functional>
#include <vector>

#include "quasispec/phase_polynomial.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

/// p = p(ξ₁) (x-independent, ξ₂-free) with ∂p/∂ξ₁(0) ≠ 0, perturbation q, and ε.
class FlowModel {
 public:
  FlowModel(FourierTaylorSymbol p, FourierTaylorSymbol q, double epsilon);

  const FourierTaylorSymbol& p() const { return p_; }
  const FourierTaylorSymbol& q() const { return q_; }
  double epsilon() const { return epsilon_; }

  /// Throws ValidationError unless ∂⟨q⟩/∂ξ₂(0) ≠ 0.
  void require_prediction_ready() const;

 private:
  FourierTaylorSymbol p_;
  FourierTaylorSymbol q_;
  double epsilon_;
};

/// Trajectory average for x₁-translation flow: the projection onto m₁ = 0.
FourierTaylorSymbol flow_average(const FourierTaylorSymbol& q);
FourierTaylorSymbol flow_average(const FourierTaylorSymbol& q, const FlowModel& model);

/// G with modes G_m = q_m / (i m₁ p′(ξ₁)) for m₁ ≠ 0, reciprocals expanded to degree D.
FourierTaylorSymbol weight_G(const FlowModel& model, int D, double floor = 1e-14);

/// Largest coefficient of H_pG − (q − ⟨q⟩) up to ξ-degree D.
double weight_residual(const FlowModel& model, const FourierTaylorSymbol& G, int D);

/// f ∘ exp(t H_G) = Σ_k t^k/k! ad_G^k f with ad_G f = {G, f}, summed until the
/// terms fall below `tolerance`·‖f‖.
FourierTaylorSymbol pullback(const FourierTaylorSymbol& f, const FourierTaylorSymbol& G, cplx t,
                             const TruncationCaps& caps, TruncationInfo* info = nullptr, double tolerance = 1e-17,
                             int max_terms = 80);

/// (p + iεq + ε²r) ∘ exp(iεH_G) = p + iε⟨q⟩ + O(ε²).
FourierTaylorSymbol averaged_symbol(const FlowModel& model, const FourierTaylorSymbol* r, const TruncationCaps& caps,
                                    TruncationInfo* info = nullptr);

// ---------------------------------------------------------------------------
// Flows.

/// A real Hamiltonian on phase space. `field` returns (∂_ξH, −∂_xH).
struct Hamiltonian {
  std::function<double(const PhasePoint&)> value;
  std::function<PhasePoint(const PhasePoint&)> field;
  bool periodic_x = true;  ///< x lives on T² (reported mod 2π)
};

/// Real part of a symbol on T*T².
Hamiltonian make_hamiltonian(const FourierTaylorSymbol& p);
/// Real part of a polynomial on ℝ⁴.
Hamiltonian make_hamiltonian(const PhasePolynomial& p);

struct FlowOptions {
  double tolerance = 1e-10;  ///< absolute and relative local error
  double box = 2.0;          ///< |ξⱼ| (and |xⱼ| off the torus) must stay below this
  double max_time = 1e3;
};

PhasePoint hamilton_flow(const Hamiltonian& H, const PhasePoint& rho0, double t, const FlowOptions& opts = {});

struct ClosedOrbit {
  double period = 0.0;
  double action = 0.0;  ///< ∮ ξ·dx
  PhasePoint end{};
};

/// On the torus: first return of x₁ to its start mod 2π. Off the torus: first
/// recurrence ρ(T) = ρ(0). Crossing/return times are refined by Newton steps.
ClosedOrbit closed_orbit(const Hamiltonian& H, const PhasePoint& rho0, const FlowOptions& opts = {});

struct ActionPeriodRow {
  double E;
  double I;
  double T;
  double dIdE;
  double defect;  ///< |dI/dE − T|
};

struct ActionPeriodReport {
  std::vector<ActionPeriodRow> rows;
  double max_defect = 0.0;
};

/// For p = p(ξ₁): I(E) and T(E) on the orbit through ξ = (ξ₁(E), 0), with dI/dE
/// from central differences I(E ± ΔE/2).
ActionPeriodReport action_period_check(const FourierTaylorSymbol& p, const std::vector<double>& E_grid,
                                       double delta_E = 1e-3, const FlowOptions& opts = {1e-12, 2.0, 1e3});

/// Largest pairwise difference of the actions of closed orbits through the given points.
double action_spread(const Hamiltonian& H, const std::vector<PhasePoint>& starts, const FlowOptions& opts = {});

}  // namespace quasispec
