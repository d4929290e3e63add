#include <cmath>
#include <random>

#include "doctest.h"
#include "quasispec/birkhoff.hpp"
#include "quasispec/eiconal.hpp"
#include "quasispec/grid.hpp"

using namespace quasispec;

namespace {

std::vector<cplx> plane_wave(int n, int k1, int k2) {
  std::vector<cplx> v(static_cast<std::size_t>(n) * n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      v[static_cast<std::size_t>(i1) * n + i2] = std::exp(I * (2.0 * kPi * (k1 * i1 + k2 * i2) / n));
  return v;
}

double max_dev(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// p_ε = ξ₁ + iεξ₂ (+ extra)
FourierTaylorSymbol linear_symbol(double eps) {
  FourierTaylorSymbol p(0, 1);
  p.set({0, 0}, {1, 0}, 1.0);
  p.set({0, 0}, {0, 1}, I * eps);
  return p;
}

double slope(double x0, double y0, double x1, double y1) { return std::log(y1 / y0) / std::log(x1 / x0); }

}  // namespace

TEST_CASE("solve_linearized examples") {
  const int n = 16;
  auto u = solve_linearized(plane_wave(n, 1, 0), n, 0.1);
  auto expect = plane_wave(n, 1, 0);
  for (auto& c : expect) c *= -I;
  CHECK(max_dev(u, expect) < 1e-14);

  u = solve_linearized(plane_wave(n, 0, 1), n, 0.1);
  expect = plane_wave(n, 0, 1);
  for (auto& c : expect) c *= -10.0;
  CHECK(max_dev(u, expect) < 1e-12);

  const std::vector<cplx> zero(static_cast<std::size_t>(n) * n, 0.0);
  CHECK(max_dev(solve_linearized(zero, n, 0.1), zero) == 0.0);

  std::vector<cplx> mean(static_cast<std::size_t>(n) * n, 1e-3);
  CHECK_THROWS_AS(solve_linearized(mean, n, 0.1), ValidationError);
}

TEST_CASE("solve_linearized satisfies the equation and the 1/eps bound") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  const int n = 16;
  for (double eps : {0.02, 0.1, 0.5}) {
    std::vector<cplx> v(static_cast<std::size_t>(n) * n);
    for (auto& c : v) c = cplx(g(rng), g(rng));
    grid::analyze(v, n);
    v[0] = 0.0;
    std::vector<cplx> vhat = v;
    grid::synthesize(v, n);
    auto u = solve_linearized(v, n, eps);
    grid::analyze(u, n);
    // (∂₁ + iε∂₂)u = v mode by mode
    double eq = 0.0;
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t i = static_cast<std::size_t>(i1) * n + i2;
        const double k1 = grid::frequency(i1, n), k2 = grid::frequency(i2, n);
        eq = std::max(eq, std::abs(cplx(-eps * k2, k1) * u[i] - vhat[i]));
      }
    CHECK(eq < 1e-13);
    for (double s : {0.0, 2.0}) {
      double vnorm = 0.0;
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          const double k1 = grid::frequency(i1, n), k2 = grid::frequency(i2, n);
          vnorm = std::max(vnorm, std::pow(1.0 + k1 * k1 + k2 * k2, 0.5 * s) *
                                      std::abs(vhat[static_cast<std::size_t>(i1) * n + i2]));
        }
      const double C = eps * weighted_norm(u, n, eps, s) / vnorm;
      CHECK(C <= 2.0);
    }
  }
}

TEST_CASE("iterate_schema: linear and single-mode problems") {
  const EiconalProblem lin(linear_symbol(0.1), 0.1);
  const auto s = iterate_schema(lin, 0.0);
  CHECK(s.iterations == 1);
  CHECK(s.b == cplx(0.0));
  CHECK(s.bound == 0.0);
  CHECK(s.residual < 1e-15);

  // G(x, ξ) = c e^{ix₁}: F = ε̃ c e^{ix₁}
  const double eps = 0.1, et = 0.3;
  const cplx c(0.02, -0.01);
  auto p = linear_symbol(eps).with_bounds(1, 1);
  p.set({1, 0}, {0, 0}, et * c);
  const EiconalProblem one(p, eps, et);
  const auto t = iterate_schema(one, 0.0);
  CHECK(std::abs(t.b) < 1e-16);
  CHECK(std::abs(t.coeff(1, 0) - I * c) < 1e-16);
  CHECK(t.iterations <= 2);
  CHECK(t.residual < 1e-15);
}

TEST_CASE("EiconalProblem validation") {
  CHECK_THROWS_AS(EiconalProblem(linear_symbol(0.1), 0.1, 0.05), ValidationError);
  CHECK_THROWS_AS(EiconalProblem(linear_symbol(0.1), 0.1, 1.2), ValidationError);
  CHECK_THROWS_AS(EiconalProblem(linear_symbol(0.1), 0.1, 0.3, 24), ValidationError);
  auto wide = linear_symbol(0.1).with_bounds(9, 1);
  CHECK_THROWS_AS(EiconalProblem(wide, 0.1, 0.3, 32), ValidationError);
  CHECK(EiconalProblem(wide, 0.1).grid() == 64);
  // p = ξ₁ alone: Zβ = 0
  CHECK_THROWS_AS(EiconalProblem(FourierTaylorSymbol::term({0, 0}, {1, 0}, 1.0), 0.1), ValidationError);
}

TEST_CASE("benchmark solution: residual, contraction and the solution bound") {
  const auto model = benchmark1();
  for (double eps : {0.05, 0.2}) {
    const auto P = EiconalProblem::from_model(model, eps);
    const auto s = iterate_schema(P, 0.0);
    const double scale = eps / P.eps_tilde() + P.eps_tilde();
    CHECK(s.residual <= 10.0 * EiconalOptions{}.tolerance);
    CHECK(s.contraction < scale);
    CHECK(s.bound < scale);
    CHECK(s.decay_rate > 2.0);
    CHECK(s.tail < 1e-16);
    CHECK(std::abs(s.coeff(0, 0)) == 0.0);
  }
}

TEST_CASE("compute_actions: closed form, examples, quadrature agreement") {
  const EiconalProblem lin(linear_symbol(0.1), 0.1, 0.3);
  const auto zero = compute_actions(iterate_schema(lin, 0.0), lin);
  CHECK(std::abs(zero.I1) == 0.0);
  CHECK(std::abs(zero.I2) == 0.0);
  const auto one = compute_actions(iterate_schema(lin, 1.0), lin);
  CHECK(std::abs(one.I1 - 2.0 * kPi * 0.03) < 1e-14);
  CHECK(std::abs(one.I2 - 2.0 * kPi * I * 0.3) < 1e-14);

  const auto P = EiconalProblem::from_model(benchmark1(), 0.1);
  const auto A = compute_actions(iterate_schema(P, cplx(0.2, -0.1)), P);
  CHECK(A.quadrature_mismatch <= 1e-8);
}

TEST_CASE("realify_actions") {
  const EiconalProblem lin(linear_symbol(0.1), 0.1);
  CHECK(std::abs(realify_actions(lin).a_star) == 0.0);

  const auto P = EiconalProblem::from_model(benchmark1(), 0.1);
  const auto R = realify_actions(P);
  CHECK(std::abs(R.actions.I1.imag()) <= 1e-10);
  CHECK(std::abs(R.actions.I2.imag()) <= 1e-10);
  CHECK(std::abs(P.eps_tilde() * R.a_star) <= 0.1);

  // a* does not depend on ε̃ once scaled: ε̃a* is the invariant combination.
  const auto R2 = realify_actions(P.with_eps_tilde(0.5));
  CHECK(std::abs(P.eps_tilde() * R.a_star - 0.5 * R2.a_star) < 1e-12);
}

TEST_CASE("realify_actions is stable under a perturbation of the second-order term") {
  auto model = benchmark1();
  FourierTaylorSymbol r(1, 1);
  r.set({0, 1}, {1, 0}, 0.5);
  r.set({0, -1}, {1, 0}, 0.5);
  r.set({0, 1}, {0, 0}, cplx(0.0, 0.3));
  r.set({0, -1}, {0, 0}, cplx(0.0, 0.3));
  const double eps = 0.1;
  model.r = r;
  const auto P = EiconalProblem::from_model(model, eps);
  const auto a0 = realify_actions(P).a_star;
  model.r = 1.1 * r;
  const auto a1 = realify_actions(EiconalProblem::from_model(model, eps)).a_star;
  CHECK(std::abs(a1 - a0) > 0.0);
  CHECK(std::abs(a1 - a0) <= 0.1 * eps / P.eps_tilde());
}

TEST_CASE("solve_family: linear model is exact") {
  const EiconalProblem lin(linear_symbol(0.1), 0.1);
  for (const auto& pt : solve_family(lin, {{0.0, 0.0}, {0.1, -0.05}, {-0.07, 0.12}})) {
    REQUIRE_FALSE(pt.error);
    CHECK(std::abs(pt.p_tilde - (pt.eta[0] + I * 0.1 * pt.eta[1])) < 1e-15);
    CHECK(weighted_norm(pt.solution->psi_per, pt.solution->grid, 0.1, 2.0) == 0.0);
  }
}

TEST_CASE("solve_family agrees with the classical normal form and keeps actions real") {
  const auto model = benchmark1();
  const double eps = 0.1;
  const auto P = EiconalProblem::from_model(model, eps);
  const auto nf = normal_form(model.operator_symbol(eps), 0, eps);
  const std::vector<Vec2> etas{{0.0, 0.0}, {0.08, -0.05}, {-0.1, 0.1}};
  const auto fam = solve_family(P, etas, {}, 2);
  for (const auto& pt : fam) {
    REQUIRE_FALSE(pt.error);
    const cplx ref = nf.p_tilde[0]({0.0, 0.0}, to_complex(pt.eta));
    CHECK(std::abs(pt.p_tilde - ref) < 1e-12);
    CHECK(pt.solution->residual <= 1e-11);
    const auto A = compute_actions(*pt.solution, P.recentered(pt.zeta));
    CHECK(std::abs(A.I1 - 2.0 * kPi * pt.eta[0]) <= 1e-8);
    CHECK(std::abs(A.I2 - 2.0 * kPi * pt.eta[1]) <= 1e-8);
  }
}

TEST_CASE("solve_family: remainder is second order in eps") {
  const auto model = benchmark1();
  std::vector<double> epss{0.05, 0.1, 0.2}, err;
  for (double eps : epss) {
    const auto pt = solve_family_point(EiconalProblem::from_model(model, eps), {0.0, 0.0});
    err.push_back(std::abs(pt.p_tilde));  // p(0) + iε⟨q⟩(0) = 0
  }
  CHECK(slope(epss[0], err[0], epss[2], err[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("kappa displacement scales as (eps, eps^2, eps)") {
  const auto model = benchmark1();
  for (double eps : {0.05, 0.1}) {
    const auto d = kappa_displacement(EiconalProblem::from_model(model, eps), {0.05, -0.03});
    CHECK(d.dx <= 0.5 * eps);
    CHECK(d.dxi1 <= 0.5 * eps * eps);
    CHECK(d.dxi2 <= 0.5 * eps);
  }
}
