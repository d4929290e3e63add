#include "quasispec/lattice.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace quasispec {

Vec2 floquet_shift(const FloquetData& f, double h) {
  if (!(h > 0.0)) throw ValidationError("floquet_shift: h must be positive");
  return {-f.S[0] / (2.0 * kPi * h) - f.alpha0[0] / 4.0, -f.S[1] / (2.0 * kPi * h) - f.alpha0[1] / 4.0};
}

bool SpectralRectangle::contains(cplx z, double eps) const {
  return std::abs(z.real() - re_center) <= re_half_width &&
         std::abs(z.imag() / eps - im_center_over_eps) <= im_half_width_over_eps;
}

double SpectralRectangle::normalized_distance(cplx z, double eps) const {
  return std::max(std::abs(z.real() - re_center) / re_half_width,
                  std::abs(z.imag() / eps - im_center_over_eps) / im_half_width_over_eps);
}

SpectralRectangle SpectralRectangle::scaled(double factor) const {
  SpectralRectangle r = *this;
  r.re_half_width *= factor;
  r.im_half_width_over_eps *= factor;
  return r;
}

void SpectralRectangle::validate() const {
  if (!(re_half_width > 0.0) || !(im_half_width_over_eps > 0.0))
    throw ValidationError("spectral rectangle: widths must be positive");
}

cplx evaluate_series(const std::vector<FourierTaylorSymbol>& p_tilde, double h, const CVec2& xi) {
  cplx z = 0.0;
  double hn = 1.0;
  for (const auto& p : p_tilde) {
    z += hn * p.mode_value({0, 0}, xi);
    hn *= h;
  }
  return z;
}

namespace {

void require_x_independent(const std::vector<FourierTaylorSymbol>& p_tilde) {
  if (p_tilde.empty()) throw ValidationError("quasi_eigenvalues: empty normal form");
  for (std::size_t n = 0; n < p_tilde.size(); ++n)
    if (!p_tilde[n].is_x_independent())
      throw ValidationError(fmt::format("quasi_eigenvalues: p_tilde[{}] depends on x", n));
}

bool shell_meets(const std::vector<FourierTaylorSymbol>& p_tilde, double h, const Vec2& theta, IVec2 c, int b,
                 const SpectralRectangle& rect, double eps) {
  auto hit = [&](int k1, int k2) {
    const CVec2 xi{h * (k1 + theta[0]), h * (k2 + theta[1])};
    return rect.contains(evaluate_series(p_tilde, h, xi), eps);
  };
  for (int t = -b; t <= b; ++t)
    if (hit(c[0] + t, c[1] - b) || hit(c[0] + t, c[1] + b) || hit(c[0] - b, c[1] + t) || hit(c[0] + b, c[1] + t))
      return true;
  return false;
}

// Real ξ with Σ hⁿp̃ₙ(ξ) at the rectangle center, by Newton on (Re, Im/ε).
std::optional<Vec2> center_preimage(const std::vector<FourierTaylorSymbol>& p_tilde, double h,
                                    const SpectralRectangle& rect, double eps) {
  const cplx target(rect.re_center, eps * rect.im_center_over_eps);
  auto F = [&](const Vec2& x) {
    const cplx z = evaluate_series(p_tilde, h, to_complex(x)) - target;
    return Vec2{z.real(), z.imag() / eps};
  };
  Vec2 x{0.0, 0.0};
  for (int it = 0; it < 50; ++it) {
    const Vec2 f = F(x);
    if (std::hypot(f[0], f[1]) < 1e-13) return x;
    const double d = 1e-7;
    const Vec2 f1 = F({x[0] + d, x[1]}), f2 = F({x[0], x[1] + d});
    const double a = (f1[0] - f[0]) / d, b = (f2[0] - f[0]) / d, c = (f1[1] - f[1]) / d, e = (f2[1] - f[1]) / d;
    const double det = a * e - b * c;
    if (!(std::abs(det) > 1e-300)) return std::nullopt;
    x[0] -= (e * f[0] - b * f[1]) / det;
    x[1] -= (-c * f[0] + a * f[1]) / det;
    if (!std::isfinite(x[0] + x[1]) || std::hypot(x[0], x[1]) > 1e3) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

LatticeResult quasi_eigenvalues(const std::vector<FourierTaylorSymbol>& p_tilde, double h, const FloquetData& floquet,
                                const SpectralRectangle& rect, double eps, int k_box) {
  require_x_independent(p_tilde);
  rect.validate();
  if (!(eps > 0.0)) throw ValidationError("quasi_eigenvalues: epsilon must be positive");
  const Vec2 theta = floquet_shift(floquet, h);
  LatticeResult out;
  Vec2 seed{0.0, 0.0};
  if (const auto xi = center_preimage(p_tilde, h, rect, eps)) seed = {(*xi)[0] / h, (*xi)[1] / h};
  out.k_center = {static_cast<int>(std::lround(seed[0] - theta[0])), static_cast<int>(std::lround(seed[1] - theta[1]))};

  constexpr int kMaxBox = 1 << 14;
  if (k_box <= 0) {
    int b = 1;
    while (shell_meets(p_tilde, h, theta, out.k_center, b, rect, eps)) {
      if (++b > kMaxBox) throw NumericalError("quasi_eigenvalues: lattice does not leave the rectangle");
    }
    k_box = static_cast<int>(std::ceil(1.5 * b));
  } else if (shell_meets(p_tilde, h, theta, out.k_center, k_box, rect, eps)) {
    throw ValidationError(
        fmt::format("quasi_eigenvalues: k_box = {} too small, lattice reaches the box boundary inside the rectangle",
                    k_box));
  }
  out.k_box = k_box;

  const double hN = std::pow(h, static_cast<double>(p_tilde.size() - 1));
  for (int k1 = out.k_center[0] - k_box; k1 <= out.k_center[0] + k_box; ++k1)
    for (int k2 = out.k_center[1] - k_box; k2 <= out.k_center[1] + k_box; ++k2) {
      const CVec2 xi{h * (k1 + theta[0]), h * (k2 + theta[1])};
      const cplx z = evaluate_series(p_tilde, h, xi);
      if (!rect.contains(z, eps)) continue;
      out.points.push_back({{k1, k2}, z});
      out.last_term_size = std::max(out.last_term_size, hN * std::abs(p_tilde.back().mode_value({0, 0}, xi)));
    }
  return out;
}

std::vector<cplx> rectangle_filter(const std::vector<cplx>& z, const SpectralRectangle& rect, double eps) {
  std::vector<cplx> out;
  for (cplx v : z)
    if (rect.contains(v, eps)) out.push_back(v);
  return out;
}

}  // namespace quasispec
