#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <complex>
#include <stdexcept>
#include <string>

namespace quasispec {

using cplx = std::complex<double>;
using IVec2 = std::array<int, 2>;
using Vec2 = std::array<double, 2>;
using CVec2 = std::array<cplx, 2>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad configuration, violated preconditions, inconsistent bounds.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract (vanishing divisor,
/// non-contraction, untrusted window, eigensolver failure, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline CVec2 to_complex(const Vec2& v) { return {cplx(v[0]), cplx(v[1])}; }

inline int max_abs(const IVec2& m) { return std::max(std::abs(m[0]), std::abs(m[1])); }

}  // namespace quasispec
