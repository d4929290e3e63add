#pragma once

// Quantum Birkhoff normal form on T*T²: conjugate an h-series symbol by
// exponentials of generators until every h-order up to N is x-independent.

#include <optional>
#include <string>
#include <vector>

#include "quasispec/symbol.hpp"

namespace quasispec {

struct NormalFormOptions {
  TruncationCaps caps{8, 12, 1e-30};
  ConjugationOptions conjugation{};
  double divisor_floor = 1e-14;
  /// Classical stage stops once the x-dependent part of the h⁰ symbol has ℓ¹ norm below this.
  double classical_tolerance = 1e-15;
  int classical_max_steps = 40;
  /// Radius r of the ξ-polydisc used by gradient_norm.
  double growth_radius = 0.2;
  /// Divisor expansions whose estimated convergence radius falls below this raise a warning.
  double validity_radius = 0.3;
};

struct DivisorRecord {
  int order;  ///< -1 for the classical stage
  IVec2 m;
  double radius;  ///< estimated convergence radius of 1/(i m·∂_ξp₀)
};

struct NormalFormResult {
  std::vector<FourierTaylorSymbol> p_tilde;     ///< x-independent, length N + 1
  std::vector<FourierTaylorSymbol> generators;  ///< aₙ entering at hⁿ, length N
  /// Generators entering at h⁻¹ that make the h⁰ symbol x-independent (empty if it already is).
  std::vector<FourierTaylorSymbol> classical_generators;
  double epsilon = 0.0;
  std::vector<double> growth_log;  ///< gradient_norm(aₙ)
  double classical_growth = 0.0;   ///< Σ gradient_norm over the classical generators
  std::vector<double> x_defect;    ///< per order: max |coefficient| at m ≠ 0 after conjugation
  HSeries conjugated;              ///< the fully conjugated series
  TruncationInfo truncation;
  std::vector<DivisorRecord> divisors;
  std::vector<std::string> warnings;
};

/// Projection onto the x-mean (mode m = 0).
FourierTaylorSymbol x_mean(const FourierTaylorSymbol& s);
/// s − x_mean(s).
FourierTaylorSymbol x_oscillating(const FourierTaylorSymbol& s);

/// Solves {p0, a} = b − ⟨b⟩ mode by mode: a_m = b_m / (i m·∂_ξp0), each
/// reciprocal re-expanded to degree D. The result has zero x-mean.
FourierTaylorSymbol cohomological_solve(const FourierTaylorSymbol& p0, const FourierTaylorSymbol& b, int D,
                                        double floor = 1e-14, std::vector<DivisorRecord>* divisors = nullptr,
                                        int order = 0);

NormalFormResult normal_form(const HSeries& P, int N, double eps, const NormalFormOptions& opts = {});

/// Σ |c_{m,α}| r^{|α|} (|m|₁ + |α|/r): bounds sup |∇_{x,ξ} a| on T² × {|ξⱼ| ≤ r}.
double gradient_norm(const FourierTaylorSymbol& a, double r);

struct GrowthRow {
  int n;  ///< generator order; -1 for the classical stage
  std::vector<double> eps;
  std::vector<double> norms;
  double slope = 0.0;
  std::optional<double> bound;  ///< −(1 + 2n) for n ≥ 0
  bool exact_zero = false;
  bool pass = true;
};

/// Per-n log-log slope of gradient_norm(aₙ) against ε over a set of runs.
std::vector<GrowthRow> growth_report(const std::vector<NormalFormResult>& runs);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace quasispec
