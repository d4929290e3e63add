#pragma once

// Batched 2-D discrete Fourier transforms on n×n periodic grids over T².
// Layout for `fields` interleaved components: data[(i₁·n + i₂)·fields + f],
// grid point x = 2π(i₁, i₂)/n, Fourier index k stored at (k mod n).

#include <span>

#include "quasispec/common.hpp"

namespace quasispec::grid {

/// Fourier coefficients → grid values: u(x) = Σ_k û(k) e^{i k·x}.
void synthesize(std::span<cplx> data, int n, int fields = 1);

/// Grid values → Fourier coefficients: û(k) = n⁻² Σ_x u(x) e^{−i k·x}.
void analyze(std::span<cplx> data, int n, int fields = 1);

/// Smallest 2^a 3^b 5^c ≥ n.
int good_size(int n);

inline int wrap(int k, int n) { return ((k % n) + n) % n; }

/// Signed frequency of storage index i on an n-point axis (Nyquist maps to −n/2).
inline int frequency(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }

}  // namespace quasispec::grid
