#pragma once

// JSON interchange for symbols, phase-space polynomials and normal forms.
//
//   symbol:     {"K": int, "D": int, "coeffs": [{"m": [i, j], "alpha": [a, b], "re": x, "im": y}, ...]}
//   polynomial: {"terms": [{"e": [x1, x2, xi1, xi2], "re": x, "im": y}, ...]}

#include <nlohmann/json.hpp>

#include "quasispec/birkhoff.hpp"
#include "quasispec/phase_polynomial.hpp"
#include "quasispec/symbol.hpp"

namespace quasispec {

inline constexpr const char* kSchemaVersion = "v1";

/// Coefficients in for_each order, so equal symbols give identical documents.
nlohmann::json symbol_to_json(const FourierTaylorSymbol& s);
/// Throws ValidationError on missing fields, out-of-bounds or duplicate keys, non-finite values.
FourierTaylorSymbol symbol_from_json(const nlohmann::json& j);

nlohmann::json polynomial_to_json(const PhasePolynomial& p);
PhasePolynomial polynomial_from_json(const nlohmann::json& j);

/// p̃ₙ, generators, growth log, defects and warnings; the conjugated series and
/// divisor records are not serialized.
nlohmann::json normal_form_to_json(const NormalFormResult& nf);
NormalFormResult normal_form_from_json(const nlohmann::json& j);

}  // namespace quasispec
