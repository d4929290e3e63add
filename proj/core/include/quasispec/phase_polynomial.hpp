#pragma once

// Polynomials in the phase-space variables (x₁, x₂, ξ₁, ξ₂) with complex
// coefficients, for Hamiltonians on ℝ⁴ that are not periodic in x.

#include <array>
#include <map>
#include <vector>

#include "quasispec/common.hpp"

namespace quasispec {

/// Exponents of x₁, x₂, ξ₁, ξ₂.
using Exponent4 = std::array<int, 4>;
using PhasePoint = std::array<double, 4>;

class PhasePolynomial {
 public:
  PhasePolynomial() = default;

  static PhasePolynomial constant(cplx c);
  static PhasePolynomial monomial(Exponent4 e, cplx c = 1.0);
  /// The coordinate function with index 0..3 (x₁, x₂, ξ₁, ξ₂).
  static PhasePolynomial variable(int index);

  const std::map<Exponent4, cplx>& terms() const { return terms_; }
  cplx coeff(Exponent4 e) const;
  void add(Exponent4 e, cplx c);
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool is_homogeneous(int d) const;
  /// True iff every coefficient is real.
  bool is_real() const;

  cplx operator()(const PhasePoint& p) const;
  /// ∂/∂(variable index).
  PhasePolynomial derivative(int index) const;

  PhasePolynomial& operator+=(const PhasePolynomial& o);
  PhasePolynomial& operator-=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(cplx s);

  friend bool operator==(const PhasePolynomial& a, const PhasePolynomial& b) { return a.terms_ == b.terms_; }

 private:
  void prune();
  std::map<Exponent4, cplx> terms_;
};

PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b);
PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b);
PhasePolynomial operator*(cplx s, PhasePolynomial a);
PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b);
PhasePolynomial pow(const PhasePolynomial& a, int n);

/// {a, b} = ∂_ξa·∂_xb − ∂_xa·∂_ξb.
PhasePolynomial poisson_bracket(const PhasePolynomial& a, const PhasePolynomial& b);

double max_difference(const PhasePolynomial& a, const PhasePolynomial& b);

}  // namespace quasispec
