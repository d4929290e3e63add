#include "quasispec/barriertop.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

namespace quasispec {

void ResonantSaddle::validate() const {
  if (!(lambdas[0] > 0.0 && lambdas[1] > 0.0))
    throw ValidationError(fmt::format("saddle: lambdas must be positive, got ({}, {})", lambdas[0], lambdas[1]));
  if (k_res) {
    if ((*k_res)[0] == 0 && (*k_res)[1] == 0) throw ValidationError("saddle: k_res must be nonzero");
    const double r = lambdas[0] * (*k_res)[0] + lambdas[1] * (*k_res)[1];
    if (std::abs(r) > 1e-12)
      throw ValidationError(fmt::format("saddle: lambda . k_res = {:.3e}, not a resonance", r));
  }
  for (const auto& [e, c] : p3.terms()) {
    if (e[2] != 0 || e[3] != 0 || e[0] + e[1] != 3)
      throw ValidationError("saddle: p3 must be a homogeneous cubic in x");
  }
}

PhasePolynomial harmonic_p2(const Vec2& lambdas) {
  PhasePolynomial p;
  for (int j = 0; j < 2; ++j) {
    Exponent4 ex{}, exi{};
    ex[static_cast<std::size_t>(j)] = 2;
    exi[static_cast<std::size_t>(j) + 2] = 2;
    p.add(ex, 0.5 * lambdas[static_cast<std::size_t>(j)]);
    p.add(exi, 0.5 * lambdas[static_cast<std::size_t>(j)]);
  }
  return p;
}

Commensuration commensurate(const Vec2& lambdas, int max_denominator) {
  if (!(lambdas[0] > 0.0 && lambdas[1] > 0.0)) throw ValidationError("commensurate: lambdas must be positive");
  const double ratio = lambdas[0] / lambdas[1];
  // Continued-fraction convergents of λ₁/λ₂.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = ratio;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const long p2 = static_cast<long>(a) * p1 + p0, q2 = static_cast<long>(a) * q1 + q0;
    if (p2 > max_denominator || q2 > max_denominator) break;
    if (std::abs(ratio - static_cast<double>(p2) / static_cast<double>(q2)) <= 1e-12 * std::max(1.0, ratio)) {
      const IVec2 n{static_cast<int>(p2), static_cast<int>(q2)};
      return {lambdas[0] / n[0], n};
    }
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  throw ValidationError(fmt::format("harmonic flow is not periodic: lambda = ({}, {}) is not rationally related",
                                    lambdas[0], lambdas[1]));
}

namespace {

// Polynomials in (z₁, z₂, z̄₁, z̄₂) reuse the four-variable container.
PhasePolynomial to_z(const PhasePolynomial& poly) {
  std::array<PhasePolynomial, 4> sub;
  for (int j = 0; j < 2; ++j) {
    const auto z = PhasePolynomial::variable(j), zb = PhasePolynomial::variable(j + 2);
    sub[static_cast<std::size_t>(j)] = 0.5 * (z + zb);
    sub[static_cast<std::size_t>(j) + 2] = cplx(0.0, -0.5) * (z - zb);
  }
  PhasePolynomial out;
  for (const auto& [e, c] : poly.terms()) {
    PhasePolynomial t = PhasePolynomial::constant(c);
    for (int v = 0; v < 4; ++v) t = t * pow(sub[static_cast<std::size_t>(v)], e[static_cast<std::size_t>(v)]);
    out += t;
  }
  return out;
}

PhasePolynomial from_z(const PhasePolynomial& zpoly) {
  std::array<PhasePolynomial, 4> sub;
  for (int j = 0; j < 2; ++j) {
    const auto x = PhasePolynomial::variable(j), xi = PhasePolynomial::variable(j + 2);
    sub[static_cast<std::size_t>(j)] = x + I * xi;
    sub[static_cast<std::size_t>(j) + 2] = x - I * xi;
  }
  PhasePolynomial out;
  for (const auto& [e, c] : zpoly.terms()) {
    PhasePolynomial t = PhasePolynomial::constant(c);
    for (int v = 0; v < 4; ++v) t = t * pow(sub[static_cast<std::size_t>(v)], e[static_cast<std::size_t>(v)]);
    out += t;
  }
  return out;
}

}  // namespace

PhasePolynomial harmonic_average(const PhasePolynomial& poly, const Vec2& lambdas) {
  const auto c = commensurate(lambdas);
  const auto z = to_z(poly);
  double scale = 0.0;
  for (const auto& [e, coef] : z.terms()) scale = std::max(scale, std::abs(coef));
  // Round-off from the change of variables is pruned so that all-resonant and
  // all-oscillating inputs come back exactly (poly itself, or zero).
  PhasePolynomial kept;
  bool dropped = false;
  for (const auto& [e, coef] : z.terms()) {
    if (std::abs(coef) <= 1e-14 * scale) continue;
    // Integer frequency bookkeeping: λ·(a − b) = ω n·(a − b).
    if (c.n[0] * (e[0] - e[2]) + c.n[1] * (e[1] - e[3]) == 0)
      kept.add(e, coef);
    else
      dropped = true;
  }
  if (!dropped) return poly;
  return from_z(kept);
}

cplx average_by_quadrature(const PhasePolynomial& poly, const Vec2& lambdas, const PhasePoint& rho, int nodes) {
  if (nodes < 2 || nodes % 2 != 0) throw ValidationError("average_by_quadrature: nodes must be even and >= 2");
  const double T = commensurate(lambdas).period();
  const auto zeros = boost::math::legendre_p_zeros<double>(nodes);
  auto at = [&](double t) {
    PhasePoint r{};
    for (int j = 0; j < 2; ++j) {
      const double l = lambdas[static_cast<std::size_t>(j)];
      const double x = rho[static_cast<std::size_t>(j)], xi = rho[static_cast<std::size_t>(j) + 2];
      r[static_cast<std::size_t>(j)] = x * std::cos(l * t) + xi * std::sin(l * t);
      r[static_cast<std::size_t>(j) + 2] = -x * std::sin(l * t) + xi * std::cos(l * t);
    }
    return poly(r);
  };
  cplx sum = 0.0;
  for (double x : zeros) {
    if (x == 0.0) continue;  // even node count: no zero node
    const double dp = boost::math::legendre_p_prime(nodes, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    sum += w * (at(0.5 * T * (1.0 + x)) + at(0.5 * T * (1.0 - x)));
  }
  return 0.5 * sum;
}

ReducedProblem rescale(const ResonantSaddle& saddle, double eps, double h) {
  saddle.validate();
  if (!(eps > 0.0)) throw ValidationError("rescale: eps must be positive");
  if (!(h > 0.0)) throw ValidationError("rescale: h must be positive");
  ReducedProblem r;
  r.eps = eps;
  r.h = h;
  r.h_tilde = h / (eps * eps);
  r.lambdas = saddle.lambdas;
  r.E0 = saddle.E0;
  r.p2 = harmonic_p2(saddle.lambdas);
  r.averaged_p3 = harmonic_average(saddle.p3, saddle.lambdas);
  r.perturbation = (I * eps * std::exp(I * (0.75 * kPi))) * r.averaged_p3;
  if (std::pow(h, 0.25) >= eps)
    r.warnings.push_back(fmt::format("eps = {} is not above h^(1/4) = {:.4g}; the resonance window needs h^delta < eps "
                                     "with delta < 1/4",
                                     eps, std::pow(h, 0.25)));
  if (std::pow(h, 0.5) >= eps)
    r.warnings.push_back(fmt::format("eps = {} is not above h^(1/2) = {:.4g}; the lattice prediction needs h^delta < eps with delta < 1/2",
                                     eps, std::pow(h, 0.5)));
  if (r.averaged_p3.is_zero()) r.warnings.push_back("the averaged cubic term vanishes identically");
  return r;
}

RescaleInputs rescale_inverse(const ReducedProblem& r) {
  if (!(r.eps > 0.0)) throw ValidationError("rescale_inverse: eps must be positive");
  return {r.eps, r.h_tilde * r.eps * r.eps, (1.0 / (I * r.eps * std::exp(I * (0.75 * kPi)))) * r.perturbation};
}

std::vector<Resonance> resonance_lattice(const ReducedProblem& reduced, const std::vector<FourierTaylorSymbol>& p_tilde,
                                         const FloquetData& floquet, const SpectralRectangle& rect) {
  if (p_tilde.empty()) throw ValidationError("resonance_lattice: the action-chart normal form is missing");
  const auto lat = quasi_eigenvalues(p_tilde, reduced.h_tilde, floquet, rect, reduced.eps);
  std::vector<Resonance> out;
  out.reserve(lat.points.size());
  const double e2 = reduced.eps * reduced.eps;
  for (const auto& pt : lat.points) out.push_back({pt.k, pt.z, reduced.E0 - I * e2 * pt.z});
  return out;
}

std::vector<Resonance> resonance_lattice(const ReducedProblem& reduced, const NormalFormResult& nf,
                                         const FloquetData& floquet, const SpectralRectangle& rect) {
  return resonance_lattice(reduced, nf.p_tilde, floquet, rect);
}

}  // namespace quasispec
