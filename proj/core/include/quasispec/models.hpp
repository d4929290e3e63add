#pragma once

// Model definitions: an unperturbed symbol p(ξ₁) in the normal-form chart, a
// perturbation q(x, ξ), an optional second-order term r, and the spectral data
// (Floquet condition, target rectangle) used by the prediction pipeline.

#include <optional>
#include <string>

#include "quasispec/lattice.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

struct Model {
  std::string name;
  FourierTaylorSymbol p;
  FourierTaylorSymbol q;
  std::optional<FourierTaylorSymbol> r;  ///< enters as ε² r
  FloquetData floquet;
  SpectralRectangle rect;

  /// Principal symbol p + iεq (+ ε² r).
  FourierTaylorSymbol principal(double eps) const;
  /// The operator symbol as an h-series (only the h⁰ term is nonzero).
  HSeries operator_symbol(double eps) const;
};

/// p = ξ₁ + 0.3ξ₁², q = ξ₂ + 0.15ξ₁ξ₂ + 0.2cos(x₁)(1 + ξ₂) + 0.1sin(x₁ + x₂),
/// S = 0, α⁰ = 0, rectangle half-widths 0.15 / 0.15, F₀ = 0.
Model benchmark1();

/// p = ξ₁, q = ξ₂: x-independent, every construction is exact.
Model linear_model();

/// Named built-in model; throws ValidationError for unknown names.
Model builtin_model(const std::string& name);

}  // namespace quasispec
