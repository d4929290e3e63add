// Acceptance gate: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "quasispec/barriertop.hpp"
#include "quasispec/birkhoff.hpp"
#include "quasispec/eiconal.hpp"
#include "quasispec/geomflow.hpp"
#include "quasispec/models.hpp"
#include "quasispec/speccompare.hpp"
#include "quasispec/torusquant.hpp"

using namespace quasispec;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, std::string what) {
    pass = pass && ok;
    lines.push_back(fmt::format("    {} {}", ok ? "ok  " : "FAIL", what));
  }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int workers() { return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 4u)); }

double interior_max(const Eigen::MatrixXcd& A, const QuantizationWindow& w, int r) {
  double d = 0.0;
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j)
      if (max_abs(w.mode(i)) <= r && max_abs(w.mode(j)) <= r) d = std::max(d, std::abs(A(i, j)));
  return d;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

Outcome spectral_agreement() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto b = benchmark1();
  CompareOptions opts;
  opts.workers = workers();
  const auto s = convergence_study(b, {1.0 / 16, 1.0 / 24, 1.0 / 32, 1.0 / 48}, 3, 0.1, opts);
  int largest = 0;
  for (const auto& r : s.runs) {
    largest = std::max(largest, r.window.dimension());
    o.lines.push_back(fmt::format("    h = 1/{:<3.0f} M = {:2d} dim = {:4d} sup error = {:.3e} counts {}/{} unmatched {}",
                                  1.0 / r.h, r.window.M, r.window.dimension(), r.report.sup_error,
                                  r.report.inner_pred, r.report.inner_oracle, r.report.inner_unmatched));
    o.check(r.trust.pass, fmt::format("window trusted at h = 1/{:.0f}", 1.0 / r.h));
  }
  o.check(!s.exact && s.slope >= 3.0, fmt::format("log-log slope {:.3f} >= 3", s.slope));
  o.check(s.counts_agree, "eigenvalue counts equal lattice counts at every h");
  o.check(largest <= 4096, fmt::format("largest matrix {} <= 4096", largest));
  const double t = since(t0);
  o.check(t <= 600.0, fmt::format("runtime {:.1f} s <= 600 s", t));
  return o;
}

Outcome eiconal_solver() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto b = benchmark1();
  std::vector<double> es{0.05, 0.1, 0.2}, scale, ratio, a_size;
  double C = 0.0, Cp = 0.0;
  for (double eps : es) {
    const auto P = EiconalProblem::from_model(b, eps);
    const auto R = realify_actions(P);
    const double et = P.eps_tilde();
    const double im = std::max(std::abs(R.actions.I1.imag()), std::abs(R.actions.I2.imag()));
    o.check(R.solution.residual <= 1e-10, fmt::format("eps = {}: residual {:.2e} <= 1e-10", eps, R.solution.residual));
    o.check(im <= 1e-10, fmt::format("eps = {}: |Im I| {:.2e} <= 1e-10", eps, im));
    scale.push_back(eps / et + et);
    ratio.push_back(R.solution.contraction);
    a_size.push_back(std::abs(et * R.a_star));
    C = std::max(C, ratio.back() / scale.back());
    Cp = std::max(Cp, a_size.back() / eps);
    o.lines.push_back(fmt::format("    eps = {:<4} eps~ = {:.4f} contraction {:.3e} ratio/(eps/eps~+eps~) {:.3e} "
                                  "|eps~ a*| {:.3e}",
                                  eps, et, ratio.back(), ratio.back() / scale.back(), a_size.back()));
  }
  const double s1 = loglog_slope(scale, ratio), s2 = loglog_slope(es, a_size);
  o.check(s1 >= 0.9, fmt::format("contraction vs eps/eps~+eps~: slope {:.2f} >= 0.9, C = {:.3e}", s1, C));
  o.check(s2 >= 0.9, fmt::format("|eps~ a*| vs eps: slope {:.2f} >= 0.9, C' = {:.3e}", s2, Cp));
  const double t = since(t0);
  o.check(t <= 30.0, fmt::format("runtime {:.1f} s <= 30 s", t));
  return o;
}

Outcome reduced_symbol_order() {
  Outcome o;
  const auto b = benchmark1();
  const auto q_avg = flow_average(b.q);
  std::vector<Vec2> etas;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) etas.push_back({-0.05 + 0.025 * i, -0.05 + 0.025 * j});
  std::vector<double> es{0.05, 0.1, 0.2}, rem;
  for (double eps : es) {
    const auto fam = solve_family(EiconalProblem::from_model(b, eps), etas, {}, workers());
    double m = 0.0;
    for (const auto& f : fam) {
      if (f.error) {
        o.check(false, fmt::format("eps = {}: family point failed: {}", eps, *f.error));
        continue;
      }
      const CVec2 eta = to_complex(f.eta);
      const cplx first = b.p.mode_value({0, 0}, eta) + I * eps * q_avg.mode_value({0, 0}, eta);
      m = std::max(m, std::abs(f.p_tilde - first));
    }
    rem.push_back(m);
    o.lines.push_back(fmt::format("    eps = {:<4} sup remainder {:.4e}  remainder/eps^2 {:.4f}", eps, m, m / (eps * eps)));
  }
  const double s = loglog_slope(es, rem);
  o.check(s >= 1.9, fmt::format("log-log slope {:.3f} >= 1.9", s));
  return o;
}

Outcome bnf_consistency() {
  Outcome o;
  const auto b = benchmark1();
  const auto n3 = normal_form(b.operator_symbol(0.1), 3, 0.1);
  const auto n4 = normal_form(b.operator_symbol(0.1), 4, 0.1);
  for (int n = 0; n <= 3; ++n)
    o.check(n3.x_defect[n] <= 1e-10, fmt::format("x-dependent defect at h^{}: {:.2e} <= 1e-10", n, n3.x_defect[n]));
  double stab = 0.0;
  for (int n = 0; n <= 3; ++n) stab = std::max(stab, max_difference(n3.p_tilde[n], n4.p_tilde[n]));
  o.check(stab <= 1e-12, fmt::format("p_tilde_0..3 under N = 3 -> 4: {:.2e} <= 1e-12", stab));

  const std::vector<double> es{0.025, 0.05, 0.1, 0.2};
  std::vector<NormalFormResult> runs(es.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < es.size(); ++i)
    pool.emplace_back([&, i] { runs[i] = normal_form(b.operator_symbol(es[i]), 2, es[i]); });
  for (auto& t : pool) t.join();
  for (const auto& row : growth_report(runs)) {
    std::string norms;
    for (double v : row.norms) norms += fmt::format(" {:.3e}", v);
    if (row.n < 0) {
      o.lines.push_back(fmt::format("    classical generators: slope {:.3f}, norms{}", row.slope, norms));
      continue;
    }
    if (row.n > 1) continue;
    o.check(row.pass, fmt::format("growth of a_{}: {} >= {} (norms{})", row.n,
                                  row.exact_zero ? std::string("identically zero") : fmt::format("slope {:.3f}", row.slope),
                                  *row.bound, norms));
  }
  return o;
}

Outcome geometry_identities() {
  Outcome o;
  const auto b = benchmark1();
  const auto rep = action_period_check(b.p, {-0.2, -0.1, 0.0, 0.1, 0.2, 0.3});
  o.check(rep.max_defect <= 1e-6, fmt::format("max |dI/dE - T| = {:.2e} <= 1e-6 over {} energies", rep.max_defect,
                                              rep.rows.size()));

  const FlowOptions fo{1e-12, 2.0, 1e3};
  double spread = 0.0;
  {
    // p itself: one level set ξ₁ = ξ(E), several starting points on T²
    const double E = 0.15, xi = (-1.0 + std::sqrt(1.0 + 1.2 * E)) / 0.6;
    std::vector<PhasePoint> starts;
    for (double x : {0.0, 1.1, 2.5, 5.0}) starts.push_back({x, 2.0 - x, xi, 0.0});
    spread = std::max(spread, action_spread(make_hamiltonian(b.p), starts, fo));
  }
  {
    // x-dependent variant ξ₁(1 + 0.05cos x₁) + 0.3ξ₁²
    FourierTaylorSymbol p = b.p.with_bounds(1, 2);
    p.set({1, 0}, {1, 0}, 0.025);
    p.set({-1, 0}, {1, 0}, 0.025);
    const double E = 0.15;
    std::vector<PhasePoint> starts;
    for (double x1 : {0.0, 1.3, 2.9, 4.4}) {
      const double c = 1.0 + 0.05 * std::cos(x1);
      starts.push_back({x1, 0.7 * x1, (-c + std::sqrt(c * c + 1.2 * E)) / 0.6, 0.0});
    }
    spread = std::max(spread, action_spread(make_hamiltonian(p), starts, fo));
  }
  o.check(spread <= 1e-9, fmt::format("action spread on level sets {:.2e} <= 1e-9", spread));
  return o;
}

Outcome oracle_exactness() {
  Outcome o;
  const double eps = 0.1, h = 1.0 / 32;
  const auto b = benchmark1();
  {
    // x-independent: ⟨benchmark⟩ plus an h¹ term
    const auto p0 = b.p + I * eps * flow_average(b.q).with_bounds(0, 2);
    const auto p1 = FourierTaylorSymbol::term({0, 0}, {0, 2}, 0.5);
    const HSeries P{p0, p1};
    const FloquetData fl{{0.05, 0.0}, {1, 0}};
    const int M = auto_window_size(P, h, fl, b.rect, eps);
    const auto spectrum = oracle_spectrum(P, make_window(M, h, fl), b.rect, eps);
    const auto lat = quasi_eigenvalues({p0, p1}, h, fl, b.rect, eps);
    const auto rep = match_spectra(lat.points, spectrum.eigenvalues, b.rect, eps, 1.0);
    o.check(rep.counts_agree() && rep.sup_error <= 1e-12,
            fmt::format("x-independent symbol: {} eigenvalues, sup |oracle - lattice| = {:.2e} <= 1e-12",
                        rep.inner_pairs, rep.sup_error));
  }
  {
    // the benchmark with a real coupling: p + εq is real-valued
    const HSeries P{b.p.with_bounds(1, 2) + eps * b.q};
    double im = 0.0;
    for (cplx z : eigs(weyl_matrix(P, make_window(24, h, FloquetData{{0.3, 0.1}, {1, 1}}))))
      im = std::max(im, std::abs(z.imag()));
    o.check(im <= 1e-12, fmt::format("real symbol: max |Im lambda| = {:.2e} <= 1e-12", im));
  }
  {
    const auto P = b.operator_symbol(eps);
    const FloquetData base{{0.2, -0.1}, {0, 0}};
    const FloquetData moved{{0.2 + 2 * kPi * h * 3, -0.1 - 2 * kPi * h * 2}, {4, -8}};
    const auto wa = make_window(20, h, base);
    const double d1 = max_abs_diff(eigs(weyl_matrix(P, wa)), eigs(weyl_matrix(P, make_window(20, h, moved))));
    // without reducing θ: the basis moves by one index, interior eigenvalues agree
    auto wc = wa;
    wc.theta = {wa.theta[0] + 1.0, wa.theta[1] - 1.0};
    const double d2 = max_abs_diff(rectangle_filter(eigs(weyl_matrix(P, wa)), b.rect, eps),
                                   rectangle_filter(eigs(weyl_matrix(P, wc)), b.rect, eps));
    o.check(std::max(d1, d2) <= 1e-12,
            fmt::format("integer theta shift: {:.2e} (reduced), {:.2e} (unreduced) <= 1e-12", d1, d2));
  }
  {
    FourierTaylorSymbol a(1, 2), c(1, 2);
    a.set({1, 0}, {1, 0}, 0.5);
    a.set({0, -1}, {0, 2}, cplx(0.2, 0.1));
    a.set({0, 0}, {1, 1}, 1.0);
    c.set({-1, 1}, {2, 0}, 0.3);
    c.set({0, 1}, {0, 1}, cplx(0.0, 0.4));
    c.set({0, 0}, {0, 0}, 0.7);
    const std::vector<double> hs{0.1, 0.05, 0.025};
    for (int N : {1, 2}) {
      const auto ab = star_product(HSeries{a}, HSeries{c}, N, TruncationCaps{4, 8, 0.0});
      std::vector<double> defect;
      for (double hh : hs) {
        const int r = static_cast<int>(std::lround(0.4 / hh));
        QuantizationWindow w;
        w.M = r + 4;
        w.h = hh;
        w.theta = {0.3, 0.6};
        const Eigen::SparseMatrix<cplx> A = weyl_matrix(HSeries{a}, w).sparseView();
        const Eigen::SparseMatrix<cplx> C = weyl_matrix(HSeries{c}, w).sparseView();
        defect.push_back(interior_max(Eigen::MatrixXcd(A * C) - weyl_matrix(ab, w), w, r));
      }
      const double s = loglog_slope(hs, defect);
      o.check(s >= N + 0.5, fmt::format("Op(a)Op(b) - Op(a#b) at N = {}: defects {:.2e} {:.2e} {:.2e}, slope {:.3f} >= {}",
                                        N, defect[0], defect[1], defect[2], s, N + 0.5));
    }
  }
  return o;
}

Outcome barrier_top_averaging() {
  Outcome o;
  const auto x1 = PhasePolynomial::variable(0), x2 = PhasePolynomial::variable(1);
  const auto xi1 = PhasePolynomial::variable(2), xi2 = PhasePolynomial::variable(3);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  bool all_zero = true;
  int count = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c) {
        all_zero = all_zero && harmonic_average(PhasePolynomial::monomial({a, b, c, 3 - a - b - c}), {1.0, 1.0}).is_zero();
        ++count;
      }
  PhasePolynomial mix;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) mix.add({a, b, 0, 3 - a - b}, cplx(u(rng), u(rng)));
  all_zero = all_zero && harmonic_average(mix, {1.0, 1.0}).is_zero();
  o.check(all_zero, fmt::format("lambda = (1,1): all {} cubic monomials and a random cubic average to 0", count));

  const auto avg = harmonic_average(x1 * x1 * x2, {1.0, 2.0});
  const auto w = (x1 + I * xi1) * (x1 + I * xi1) * (x2 - I * xi2);
  PhasePolynomial expect;
  for (const auto& [e, c] : w.terms()) expect.add(e, 0.25 * c.real());
  const double closed = max_difference(avg, expect);
  double quad = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PhasePoint rho{u(rng), u(rng), u(rng), u(rng)};
    quad = std::max(quad, std::abs(average_by_quadrature(x1 * x1 * x2, {1.0, 2.0}, rho) - avg(rho)));
  }
  o.check(closed <= 1e-15, fmt::format("lambda = (1,2): <x1^2 x2> - Re(z1^2 conj(z2))/4 = {:.2e}", closed));
  o.check(quad <= 1e-10, fmt::format("lambda = (1,2): quadrature agreement {:.2e} <= 1e-10 at 20 points", quad));

  bool exact = true;
  const ResonantSaddle s{{1.0, 2.0}, IVec2{2, -1}, x1 * x1 * x2, 0.0};
  for (double eps : {0.05, 0.1, 0.2})
    for (double h : {1e-3, 1e-4, 1e-5}) {
      const auto r = rescale(s, eps, h);
      exact = exact && r.h_tilde == h / (eps * eps) && r.eps == eps && r.h == h;
    }
  o.check(exact, "h_tilde = h / eps^2 bit-exact on a 3 x 3 grid of (eps, h)");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "end-to-end spectral agreement", spectral_agreement},
      {2, "eiconal solver", eiconal_solver},
      {3, "reduced symbol order", reduced_symbol_order},
      {4, "normal form self-consistency", bnf_consistency},
      {5, "geometry identities", geometry_identities},
      {6, "oracle exactness", oracle_exactness},
      {7, "barrier-top averaging", barrier_top_averaging},
  };
  bool pass = true;
  std::vector<std::string> summary;
  for (const auto& c : all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, fmt::format("threw: {}", e.what()));
    }
    for (const auto& l : o.lines) fmt::print("{}\n", l);
    summary.push_back(
        fmt::format("[{}] #{} {} ({:.1f} s)", o.pass ? "PASS" : "FAIL", c.id, c.name, since(t0)));
    fmt::print("{}\n\n", summary.back());
    std::fflush(stdout);
    pass = pass && o.pass;
  }
  fmt::print("summary\n");
  for (const auto& s : summary) fmt::print("{}\n", s);
  return pass ? 0 : 1;
}
