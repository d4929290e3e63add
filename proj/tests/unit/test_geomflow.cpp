#include <cmath>
#include <random>

#include "doctest.h"
#include "quasispec/geomflow.hpp"
#include "quasispec/models.hpp"
#include "test_support.hpp"

using namespace quasispec;

namespace {

FourierTaylorSymbol xi1() { return FourierTaylorSymbol::term({0, 0}, {1, 0}, 1.0); }

FourierTaylorSymbol bench_p() {
  FourierTaylorSymbol p(0, 2);
  p.set({0, 0}, {1, 0}, 1.0);
  p.set({0, 0}, {2, 0}, 0.3);
  return p;
}

FourierTaylorSymbol cos_x1() {
  FourierTaylorSymbol q(1, 0);
  q.set({1, 0}, {0, 0}, 0.5);
  q.set({-1, 0}, {0, 0}, 0.5);
  return q;
}

// ξ₁ solving p(ξ₁) = E for p = ξ₁ + 0.3ξ₁².
double bench_inverse(double E) { return (-1.0 + std::sqrt(1.0 + 1.2 * E)) / 0.6; }

}  // namespace

TEST_CASE("flow_average examples") {
  FourierTaylorSymbol q0(0, 2);
  q0.set({0, 0}, {0, 1}, 1.0);
  q0.set({0, 0}, {2, 0}, 0.4);
  CHECK(flow_average(q0) == q0);

  FourierTaylorSymbol cc(1, 0);
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) cc.set({s1, s2}, {0, 0}, 0.25);
  CHECK(flow_average(cc).is_zero());

  const auto q = benchmark1().q;
  const auto avg = flow_average(q);
  CHECK(avg.coeff({0, 0}, {0, 1}) == cplx(1.0));
  CHECK(avg.coeff({0, 0}, {1, 1}) == cplx(0.15));
  CHECK(avg.nnz() == 2);
}

TEST_CASE("flow_average: idempotent and commutes with x-independent factors") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const auto q = qs_test::random_symbol(rng, 2, 3, 0.7);
    const auto f = qs_test::random_symbol(rng, 0, 2, 1.0);
    const auto avg = flow_average(q);
    CHECK(flow_average(avg) == avg);
    const TruncationCaps caps{4, 6, 0.0};
    CHECK(max_difference(flow_average(multiply(f, q, caps)), multiply(f, avg, caps)) < 1e-15);
  }
}

TEST_CASE("weight_G examples") {
  const FlowModel m1(xi1(), cos_x1(), 0.1);
  const auto G = weight_G(m1, 6);
  // sin x₁ = (e^{ix₁} − e^{−ix₁})/2i
  CHECK(std::abs(G.coeff({1, 0}, {0, 0}) - cplx(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(G.coeff({-1, 0}, {0, 0}) - cplx(0.0, 0.5)) < 1e-15);
  CHECK(G.nnz() == 2);

  FourierTaylorSymbol q_mean(1, 1);
  q_mean.set({0, 1}, {0, 1}, 0.3);
  q_mean.set({0, -1}, {0, 0}, 1.0);
  CHECK(weight_G(FlowModel(bench_p(), q_mean, 0.1), 6).is_zero());

  // q = sin(x₁+x₂): G_{(1,1)} = (1/2i)·1/(i(1 + 0.6ξ₁)) = −½ Σ (−0.6ξ₁)^k.
  FourierTaylorSymbol s(1, 0);
  s.set({1, 1}, {0, 0}, cplx(0.0, -0.5));
  s.set({-1, -1}, {0, 0}, cplx(0.0, 0.5));
  const FlowModel m3(bench_p(), s, 0.1);
  const int D = 8;
  const auto G3 = weight_G(m3, D);
  for (int k = 0; k <= D; ++k) {
    const double expect = -0.5 * std::pow(-0.6, k);
    CHECK(std::abs(G3.coeff({1, 1}, {k, 0}) - expect) < 1e-15);
    CHECK(std::abs(G3.coeff({-1, -1}, {k, 0}) - expect) < 1e-15);
  }
  CHECK(weight_residual(m3, G3, D) <= 1e-12);
}

TEST_CASE("weight_G residual and zero average of H_pG on the benchmark") {
  const auto b = benchmark1();
  const FlowModel m(b.p, b.q, 0.1);
  const int D = 10;
  const auto G = weight_G(m, D);
  CHECK(weight_residual(m, G, D) <= 1e-12);
  const auto HpG = poisson_bracket(m.p(), G, TruncationCaps{8, D, 0.0});
  CHECK(flow_average(HpG).is_zero());
}

TEST_CASE("FlowModel validates nondegeneracy") {
  const auto sq = FourierTaylorSymbol::term({0, 0}, {2, 0}, 1.0);
  CHECK_THROWS_AS(FlowModel(sq, cos_x1(), 0.1), ValidationError);
  CHECK_THROWS_AS(FlowModel(cos_x1(), cos_x1(), 0.1), ValidationError);
  CHECK_THROWS_AS(FlowModel(FourierTaylorSymbol::term({0, 0}, {1, 1}, 1.0) + xi1(), cos_x1(), 0.1),
                  ValidationError);
  const FlowModel bad(xi1(), cos_x1(), 0.1);
  CHECK_THROWS_AS(bad.require_prediction_ready(), ValidationError);
  const auto b = benchmark1();
  CHECK_NOTHROW(FlowModel(b.p, b.q, 0.1).require_prediction_ready());
}

TEST_CASE("averaged_symbol removes the x-dependence at order eps") {
  const auto b = benchmark1();
  for (double eps : {0.05, 0.1}) {
    const FlowModel m(b.p, b.q, eps);
    const auto pe = averaged_symbol(m, nullptr, TruncationCaps{8, 10, 1e-30});
    const auto first = b.p + (I * eps) * flow_average(b.q);
    const auto rest = pe - first;
    // the remainder is O(ε²) coefficientwise
    CHECK(rest.norm_max() <= 0.2 * eps * eps);
    CHECK(rest.norm_max() >= 0.001 * eps * eps);
  }
}

TEST_CASE("pullback along a zero generator is the identity; inverse pullback undoes it") {
  const auto b = benchmark1();
  const TruncationCaps caps{10, 10, 1e-30};
  const auto f = b.p + (I * 0.1) * b.q;
  CHECK(pullback(f, FourierTaylorSymbol(0, 0), 0.3, caps) == f);
  const auto G = weight_G(FlowModel(b.p, b.q, 0.1), 10);
  const auto there = pullback(f, G, cplx(0.0, 0.1), caps);
  const auto back = pullback(there, G, cplx(0.0, -0.1), caps);
  CHECK(max_difference(back.with_bounds(f.K(), f.D()), f) < 1e-10);
}

TEST_CASE("hamilton_flow examples") {
  const auto H1 = make_hamiltonian(xi1());
  const auto r = hamilton_flow(H1, {0.0, 0.0, 0.25, 0.0}, 7.0);
  CHECK(r[0] == doctest::Approx(7.0 - 2.0 * kPi).epsilon(1e-10));
  CHECK(std::abs(r[1]) < 1e-12);
  CHECK(r[2] == doctest::Approx(0.25));

  // harmonic oscillator (x₁² + ξ₁²)/2 in one plane
  const auto x = PhasePolynomial::variable(0), xi = PhasePolynomial::variable(2);
  const auto Hh = make_hamiltonian(0.5 * (x * x + xi * xi));
  const PhasePoint r0{0.3, 0.0, -0.2, 0.0};
  const auto r1 = hamilton_flow(Hh, r0, 2.0 * kPi);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r1[static_cast<std::size_t>(i)] - r0[static_cast<std::size_t>(i)]) < 1e-9);
  const auto quarter = hamilton_flow(Hh, r0, 0.5 * kPi);
  // x(t) = x₀cos t + ξ₀sin t
  CHECK(std::abs(quarter[0] - (-0.2)) < 1e-9);

  const auto orbit = closed_orbit(make_hamiltonian(bench_p()), {0.0, 0.0, 0.1, 0.0});
  CHECK(std::abs(orbit.period - 2.0 * kPi / 1.06) < 1e-10);
  CHECK(std::abs(orbit.action - 2.0 * kPi * 0.1) < 1e-10);
}

TEST_CASE("hamilton_flow conserves the energy and reports escapes") {
  FourierTaylorSymbol p = bench_p().with_bounds(1, 2);
  p.set({1, 0}, {1, 0}, 0.025);
  p.set({-1, 0}, {1, 0}, 0.025);
  p.set({0, 1}, {0, 0}, 0.02);
  p.set({0, -1}, {0, 0}, 0.02);
  const auto H = make_hamiltonian(p);
  const PhasePoint r0{0.4, 1.1, 0.12, -0.05};
  const auto orbit = closed_orbit(H, r0);
  for (double t : {0.25, 0.5, 1.0}) {
    const auto rt = hamilton_flow(H, r0, t * orbit.period);
    CHECK(std::abs(H.value(rt) - H.value(r0)) <= 1e-9);
  }

  // hyperbolic x₁ξ₁ off the torus: x grows like eᵗ
  const auto hyp = make_hamiltonian(PhasePolynomial::variable(0) * PhasePolynomial::variable(2));
  CHECK_THROWS_AS(hamilton_flow(hyp, {1.0, 0.0, 0.5, 0.0}, 5.0), NumericalError);
  CHECK_THROWS_AS(closed_orbit(make_hamiltonian(FourierTaylorSymbol::term({0, 0}, {0, 1}, 1.0)),
                               {0.0, 0.0, 0.1, 0.0}),
                  NumericalError);
}

TEST_CASE("action_period_check") {
  const auto lin = action_period_check(xi1(), {0.05, 0.1, 0.2});
  CHECK(lin.max_defect < 1e-9);
  for (const auto& row : lin.rows) {
    CHECK(std::abs(row.I - 2.0 * kPi * row.E) < 1e-10);
    CHECK(std::abs(row.T - 2.0 * kPi) < 1e-10);
  }

  const auto bench = action_period_check(bench_p(), {-0.2, -0.1, 0.0, 0.1, 0.2, 0.3});
  CHECK(bench.max_defect <= 1e-6);
  for (const auto& row : bench.rows) {
    const double xi = bench_inverse(row.E);
    CHECK(std::abs(row.T - 2.0 * kPi / (1.0 + 0.6 * xi)) < 1e-9);
    CHECK(std::abs(row.I - 2.0 * kPi * xi) < 1e-9);
  }
}

TEST_CASE("action is constant over trajectories of one level set") {
  // H = ξ₁(1 + 0.05cos x₁) + 0.3ξ₁²: different starting x₁ on one energy curve.
  FourierTaylorSymbol p = bench_p().with_bounds(1, 2);
  p.set({1, 0}, {1, 0}, 0.025);
  p.set({-1, 0}, {1, 0}, 0.025);
  const auto H = make_hamiltonian(p);
  const double E = 0.15;
  std::vector<PhasePoint> starts;
  for (double x1 : {0.0, 1.3, 2.9, 4.4}) {
    const double c = 1.0 + 0.05 * std::cos(x1);
    const double xi = (-c + std::sqrt(c * c + 1.2 * E)) / 0.6;
    starts.push_back({x1, 0.7 * x1, xi, 0.0});
  }
  CHECK(action_spread(H, starts, {1e-12, 2.0, 1e3}) <= 1e-9);
}
