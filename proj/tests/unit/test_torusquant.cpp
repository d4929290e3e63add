#include <cmath>

#include <Eigen/SparseCore>

#include "doctest.h"
#include "quasispec/models.hpp"
#include "quasispec/torusquant.hpp"

using namespace quasispec;

namespace {

FourierTaylorSymbol term(IVec2 m, IVec2 a, cplx c) { return FourierTaylorSymbol::term(m, a, c); }

QuantizationWindow window(int M, double h, Vec2 theta = {0.0, 0.0}) {
  QuantizationWindow w;
  w.M = M;
  w.h = h;
  w.theta = theta;
  return w;
}

// Interior block |k|∞ ≤ r of a window matrix.
double interior_max(const Eigen::MatrixXcd& A, const QuantizationWindow& w, int r) {
  double d = 0.0;
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j)
      if (max_abs(w.mode(i)) <= r && max_abs(w.mode(j)) <= r) d = std::max(d, std::abs(A(i, j)));
  return d;
}

}  // namespace

TEST_CASE("weyl_matrix examples") {
  const auto w = window(3, 0.1);
  const auto A = weyl_matrix(HSeries{term({0, 0}, {1, 0}, 1.0)}, w);
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j)
      CHECK(std::abs(A(i, j) - (i == j ? cplx(0.1 * w.mode(i)[0]) : cplx(0.0))) < 1e-15);

  const auto B = weyl_matrix(HSeries{term({1, 0}, {0, 0}, 1.0)}, w);
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j) {
      const IVec2 l = w.mode(i), k = w.mode(j);
      CHECK(B(i, j) == cplx(l[0] == k[0] + 1 && l[1] == k[1] ? 1.0 : 0.0));
    }

  const auto C = weyl_matrix(HSeries{term({1, 0}, {0, 1}, 1.0)}, w);
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j) {
      const IVec2 l = w.mode(i), k = w.mode(j);
      const cplx expect = (l[0] == k[0] + 1 && l[1] == k[1]) ? cplx(0.1 * k[1]) : cplx(0.0);
      CHECK(std::abs(C(i, j) - expect) < 1e-15);
    }

  CHECK_THROWS_AS(weyl_matrix(HSeries{term({7, 0}, {0, 0}, 1.0)}, w), ValidationError);
}

TEST_CASE("eigs examples") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = cplx(0.5, 1.0);
  D(1, 1) = -1.0;
  D(2, 2) = cplx(0.5, -1.0);
  const auto e = eigs(D);
  CHECK(e == std::vector<cplx>{-1.0, cplx(0.5, -1.0), cplx(0.5, 1.0)});

  Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(2, 2);
  N(0, 1) = 1.0;
  for (cplx z : eigs(N)) CHECK(std::abs(z) < 1e-15);

  N(1, 0) = 0.01;
  const auto pm = eigs(N);
  CHECK(std::abs(pm[0] + 0.1) < 1e-15);
  CHECK(std::abs(pm[1] - 0.1) < 1e-15);
}

TEST_CASE("trusted_window examples") {
  const double eps = 0.1;
  const HSeries P{term({0, 0}, {1, 0}, 1.0) + term({0, 0}, {0, 1}, I * eps)};
  const SpectralRectangle rect{0.15, 0.0, 0.15, 0.0};
  const auto good = trusted_window(P, window(10, 0.1), rect, eps);
  CHECK(good.pass);
  CHECK(good.margin > 0.0);
  const auto bad = trusted_window(P, window(2, 0.1), rect, eps);
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin < 0.0);

  const auto b = benchmark1();
  const auto bench = trusted_window(b.operator_symbol(eps), make_window(48, 1.0 / 32, b.floquet), b.rect, eps);
  CHECK(bench.pass);
  const int M = auto_window_size(b.operator_symbol(eps), 1.0 / 32, b.floquet, b.rect, eps);
  CHECK(trusted_window(b.operator_symbol(eps), make_window(M, 1.0 / 32, b.floquet), b.rect, eps).pass);
  CHECK_FALSE(trusted_window(b.operator_symbol(eps), make_window(M - 1, 1.0 / 32, b.floquet), b.rect, eps).pass);
}

TEST_CASE("x-independent symbols: oracle spectrum equals the lattice") {
  const double eps = 0.1, h = 0.05;
  FourierTaylorSymbol p0(0, 2);
  p0.set({0, 0}, {1, 0}, 1.0);
  p0.set({0, 0}, {2, 0}, 0.3);
  p0.set({0, 0}, {0, 1}, I * eps);
  const auto p1 = term({0, 0}, {0, 2}, 0.5);
  const FloquetData fl{{0.01, 0.0}, {1, 0}};
  const SpectralRectangle rect{0.15, 0.0, 0.15, 0.0};
  const HSeries P{p0, p1};
  const auto w = make_window(auto_window_size(P, h, fl, rect, eps), h, fl);
  const auto spectrum = oracle_spectrum(P, w, rect, eps);
  const auto lat = quasi_eigenvalues({p0, p1}, h, fl, rect, eps);
  const auto inside = rectangle_filter(spectrum.eigenvalues, rect, eps);
  REQUIRE(inside.size() == lat.points.size());
  for (const auto& pt : lat.points) {
    double best = 1.0;
    for (cplx z : inside) best = std::min(best, std::abs(z - pt.z));
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("Hermitian symbols have real spectra") {
  const auto b = benchmark1();
  const auto P = b.operator_symbol(0.0);
  FourierTaylorSymbol real_sym = P[0] + b.q.with_bounds(1, 2) * 0.0;
  // add a real x-dependent potential 0.2cos x₁ + 0.1cos(x₁ − x₂)ξ₁
  real_sym = real_sym.with_bounds(1, 2);
  for (int s : {-1, 1}) {
    real_sym.add({s, 0}, {0, 0}, 0.1);
    real_sym.add({s, -s}, {1, 0}, 0.05);
  }
  const auto w = make_window(8, 1.0 / 16, FloquetData{{0.2, 0.0}, {1, 1}});
  const auto A = weyl_matrix(HSeries{real_sym}, w);
  CHECK((A - A.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
  for (cplx z : eigs(A)) CHECK(std::abs(z.imag()) <= 1e-12);
}

TEST_CASE("integer theta shifts leave the spectrum invariant") {
  const auto b = benchmark1();
  const double eps = 0.1, h = 1.0 / 16;
  const auto P = b.operator_symbol(eps);
  const FloquetData a{{0.1, 0.0}, {0, 0}};
  const FloquetData moved{{0.1 + 2 * kPi * h * 2, -2 * kPi * h}, {0, 0}};
  const auto wa = make_window(10, h, a), wb = make_window(10, h, moved);
  CHECK(std::abs(wa.theta[0] - wb.theta[0]) < 1e-12);
  const auto ea = eigs(weyl_matrix(P, wa)), eb = eigs(weyl_matrix(P, wb));
  REQUIRE(ea.size() == eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(std::abs(ea[i] - eb[i]) <= 1e-12);

  // Unreduced shift: the basis is permuted, interior eigenvalues agree.
  auto wc = wa;
  wc.theta = {wa.theta[0] + 1.0, wa.theta[1] - 1.0};
  const auto rect = b.rect;
  const auto ia = rectangle_filter(eigs(weyl_matrix(P, make_window(14, h, a))), rect, eps);
  wc.M = 14;
  const auto ic = rectangle_filter(eigs(weyl_matrix(P, wc)), rect, eps);
  REQUIRE(ia.size() == ic.size());
  for (std::size_t i = 0; i < ia.size(); ++i) CHECK(std::abs(ia[i] - ic[i]) <= 1e-12);
}

TEST_CASE("Op(a)Op(b) agrees with Op(a#b) to order h^(N+1)") {
  FourierTaylorSymbol a(1, 2), c(1, 2);
  a.set({1, 0}, {1, 0}, 0.5);
  a.set({0, -1}, {0, 2}, cplx(0.2, 0.1));
  a.set({0, 0}, {1, 1}, 1.0);
  c.set({-1, 1}, {2, 0}, 0.3);
  c.set({0, 1}, {0, 1}, cplx(0.0, 0.4));
  c.set({0, 0}, {0, 0}, 0.7);
  const TruncationCaps caps{4, 8, 0.0};
  for (int N : {1, 2}) {
    std::vector<double> hs{0.1, 0.05}, defect;
    for (double h : hs) {
      // ξ-range fixed: |h k| ≲ 0.4 on the compared block
      const int r = static_cast<int>(std::lround(0.4 / h));
      const auto w = window(r + 4, h, {0.3, -0.2});
      const auto ab = star_product(HSeries{a}, HSeries{c}, N, caps);
      const Eigen::SparseMatrix<cplx> A = weyl_matrix(HSeries{a}, w).sparseView();
      const Eigen::SparseMatrix<cplx> C = weyl_matrix(HSeries{c}, w).sparseView();
      HSeries scaled(N);
      for (int n = 0; n <= N; ++n) scaled[n] = ab[n];
      const Eigen::MatrixXcd diff = Eigen::MatrixXcd(A * C) - weyl_matrix(scaled, w);
      defect.push_back(interior_max(diff, w, r));
    }
    const double slope = std::log(defect[0] / defect[1]) / std::log(hs[0] / hs[1]);
    CHECK(slope >= N + 0.5);
  }
}

TEST_CASE("oracle_spectrum rejects untrusted windows") {
  const auto b = benchmark1();
  CHECK_THROWS_AS(oracle_spectrum(b.operator_symbol(0.1), make_window(3, 1.0 / 16, b.floquet), b.rect, 0.1),
                  NumericalError);
  CHECK_THROWS_AS(weyl_matrix(b.operator_symbol(0.1), make_window(40, 1.0 / 16, b.floquet), 1000), ValidationError);
}
