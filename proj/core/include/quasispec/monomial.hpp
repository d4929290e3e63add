#pragma once

#include <span>
#include <vector>

#include "quasispec/common.hpp"

namespace quasispec::mono {

// Monomials ξ^α in two variables are enumerated by total degree, then by α₂:
//   index(α) = d(d+1)/2 + α₂,  d = α₁ + α₂.
// Indices of degree ≤ D form the prefix [0, count(D)).

constexpr int count(int max_degree) { return (max_degree + 1) * (max_degree + 2) / 2; }

constexpr int index(int a1, int a2) {
  const int d = a1 + a2;
  return d * (d + 1) / 2 + a2;
}

constexpr int index(const IVec2& a) { return index(a[0], a[1]); }

/// Exponent of the monomial at position `idx`.
IVec2 exponent(int idx);

/// Total degree of the monomial at position `idx`.
int degree(int idx);

/// A term of the polynomial product table: out[k] += a[i] * b[j].
struct ProductEntry {
  int i;
  int j;
  int k;
};

/// All (i, j) pairs with deg(i) <= da, deg(j) <= db, deg(i)+deg(j) <= dc.
/// Cached; safe to call concurrently.
std::span<const ProductEntry> product_table(int da, int db, int dc);

/// Falling factorial a!/(a-u)! (zero if u > a).
double falling(int a, int u);

}  // namespace quasispec::mono
