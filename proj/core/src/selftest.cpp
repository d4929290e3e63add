#include "quasispec/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "quasispec/barriertop.hpp"
#include "quasispec/birkhoff.hpp"
#include "quasispec/eiconal.hpp"
#include "quasispec/geomflow.hpp"
#include "quasispec/models.hpp"
#include "quasispec/parallel.hpp"
#include "quasispec/speccompare.hpp"
#include "quasispec/torusquant.hpp"

namespace quasispec {

bool SelftestReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.pass; });
}

namespace {

struct Entry {
  const char* module;
  const char* name;
  double threshold;
  bool at_most;
  std::function<double(std::mt19937_64&)> run;
};

FourierTaylorSymbol random_symbol(std::mt19937_64& rng, int K, int D) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierTaylorSymbol s(K, D);
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      for (int a1 = 0; a1 <= D; ++a1)
        for (int a2 = 0; a1 + a2 <= D; ++a2) s.set({m1, m2}, {a1, a2}, cplx(u(rng), u(rng)));
  return s;
}

double max_diff(const HSeries& a, const HSeries& b) {
  double d = 0.0;
  for (int n = 0; n <= std::min(a.order(), b.order()); ++n) d = std::max(d, max_difference(a[n], b[n]));
  return d;
}

const TruncationCaps kWide{8, 16, 0.0};
const NormalFormOptions kCheap{{6, 8, 1e-30}};

double associativity(std::mt19937_64& rng) {
  const HSeries a{random_symbol(rng, 1, 2)}, b{random_symbol(rng, 1, 2)}, c{random_symbol(rng, 1, 2)};
  return max_diff(star_product(star_product(a, b, 4, kWide), c, 4, kWide),
                  star_product(a, star_product(b, c, 4, kWide), 4, kWide));
}

double first_order_bracket(std::mt19937_64& rng) {
  const auto a = random_symbol(rng, 1, 2), b = random_symbol(rng, 1, 2);
  const auto ab = star_product(HSeries{a}, HSeries{b}, 1, kWide);
  return max_difference(ab[1], (1.0 / (2.0 * I)) * poisson_bracket(a, b, kWide));
}

double quantization_product(std::mt19937_64& rng) {
  const auto a = random_symbol(rng, 1, 2), b = random_symbol(rng, 1, 2);
  const auto ab = star_product(HSeries{a}, HSeries{b}, 4, kWide);
  const auto w = make_window(10, 0.1, FloquetData{{0.3, -0.1}, {1, 0}});
  const Eigen::MatrixXcd d = weyl_matrix(HSeries{a}, w) * weyl_matrix(HSeries{b}, w) - weyl_matrix(ab, w);
  double m = 0.0;
  for (int i = 0; i < w.dimension(); ++i)
    for (int j = 0; j < w.dimension(); ++j)
      if (max_abs(w.mode(i)) <= 6 && max_abs(w.mode(j)) <= 6) m = std::max(m, std::abs(d(i, j)));
  return m;
}

double weight_identity(std::mt19937_64&) {
  const auto b = benchmark1();
  const FlowModel m(b.p, b.q, 0.1);
  return weight_residual(m, weight_G(m, 10), 10);
}

double action_period(std::mt19937_64&) { return action_period_check(benchmark1().p, {-0.1, 0.1, 0.3}).max_defect; }

double action_level_set(std::mt19937_64&) {
  const auto x = PhasePolynomial::variable(0), xi = PhasePolynomial::variable(2);
  const auto H = make_hamiltonian(0.5 * (x * x + xi * xi) + 0.1 * pow(x, 3));
  std::vector<PhasePoint> starts;
  const double E = 0.08;
  for (double t : {0.0, 0.1, -0.1}) {
    // ξ from the energy equation at position x = t
    const double V = 0.5 * t * t + 0.1 * t * t * t;
    starts.push_back({t, 0.0, std::sqrt(2.0 * (E - V)), 0.0});
  }
  return action_spread(H, starts, {1e-12, 2.0, 1e3});
}

double eiconal_residual(std::mt19937_64&) {
  const auto P = EiconalProblem::from_model(benchmark1(), 0.1);
  return realify_actions(P).solution.residual;
}

double eiconal_real_actions(std::mt19937_64&) {
  const auto R = realify_actions(EiconalProblem::from_model(benchmark1(), 0.1));
  return std::max(std::abs(R.actions.I1.imag()), std::abs(R.actions.I2.imag()));
}

double bnf_defect(std::mt19937_64&) {
  const auto nf = normal_form(benchmark1().operator_symbol(0.1), 2, 0.1, kCheap);
  return *std::max_element(nf.x_defect.begin(), nf.x_defect.end());
}

double bnf_stability(std::mt19937_64&) {
  const auto P = benchmark1().operator_symbol(0.1);
  const auto a = normal_form(P, 1, 0.1, kCheap), b = normal_form(P, 2, 0.1, kCheap);
  return std::max(max_difference(a.p_tilde[0], b.p_tilde[0]), max_difference(a.p_tilde[1], b.p_tilde[1]));
}

double oracle_lattice(std::mt19937_64&) {
  const auto m = linear_model();
  const auto run = compare_at(m, normal_form(m.operator_symbol(0.1), 1, 0.1), 1.0 / 16, 0.1);
  if (!run.report.counts_agree()) return INFINITY;
  return run.report.sup_error;
}

double hermitian(std::mt19937_64&) {
  auto p = benchmark1().operator_symbol(0.0)[0].with_bounds(1, 2);
  for (int s : {-1, 1}) {
    p.add({s, 0}, {0, 0}, 0.1);
    p.add({s, -s}, {1, 0}, 0.05);
  }
  double m = 0.0;
  for (cplx z : eigs(weyl_matrix(HSeries{p}, make_window(8, 1.0 / 16, FloquetData{{0.2, 0.0}, {1, 1}}))))
    m = std::max(m, std::abs(z.imag()));
  return m;
}

double theta_shift(std::mt19937_64&) {
  const auto P = benchmark1().operator_symbol(0.1);
  const double h = 1.0 / 16;
  const auto a = eigs(weyl_matrix(P, make_window(8, h, FloquetData{{0.1, 0.0}, {0, 0}})));
  const auto b = eigs(weyl_matrix(P, make_window(8, h, FloquetData{{0.1 + 4 * kPi * h, -2 * kPi * h}, {4, 0}})));
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double match_symmetry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.4, 0.4), n(-0.01, 0.01);
  std::vector<LatticePoint> pa, pb;
  std::vector<cplx> a, b;
  for (int i = 0; i < 40; ++i) {
    a.push_back(cplx(u(rng), 0.1 * u(rng)));
    b.push_back(a.back() + cplx(n(rng), 0.1 * n(rng)));
    pa.push_back({{i, 0}, a.back()});
    pb.push_back({{i, 0}, b.back()});
  }
  const SpectralRectangle rect{0.5, 0.0, 0.5, 0.0};
  const auto ab = match_spectra(pa, b, rect, 0.1), ba = match_spectra(pb, a, rect, 0.1);
  if (ab.pairs.size() != ba.pairs.size()) return INFINITY;
  return std::abs(ab.sup_error - ba.sup_error) + std::abs(ab.mean_error - ba.mean_error);
}

double resonant_cubic_zero(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhasePolynomial p;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c) p.add({a, b, c, 3 - a - b - c}, cplx(u(rng), u(rng)));
  const auto avg = harmonic_average(p, {1.0, 1.0});
  double m = 0.0;
  for (const auto& [e, c] : avg.terms()) m = std::max(m, std::abs(c));
  return m;
}

double resonant_average(std::mt19937_64& rng) {
  const auto x1 = PhasePolynomial::variable(0), x2 = PhasePolynomial::variable(1);
  const auto xi1 = PhasePolynomial::variable(2), xi2 = PhasePolynomial::variable(3);
  const auto avg = harmonic_average(x1 * x1 * x2, {1.0, 2.0});
  const auto z1 = x1 + I * xi1, zb2 = x2 - I * xi2;
  const auto w = z1 * z1 * zb2;
  PhasePolynomial expect;
  for (const auto& [e, c] : w.terms()) expect.add(e, 0.25 * c.real());
  double m = max_difference(avg, expect);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    const PhasePoint rho{u(rng), u(rng), u(rng), u(rng)};
    m = std::max(m, std::abs(average_by_quadrature(x1 * x1 * x2, {1.0, 2.0}, rho) - avg(rho)));
  }
  return m;
}

double rescaled_h(std::mt19937_64&) {
  const auto x1 = PhasePolynomial::variable(0), x2 = PhasePolynomial::variable(1);
  const ResonantSaddle s{{1.0, 2.0}, IVec2{2, -1}, x1 * x1 * x2, 0.0};
  double m = 0.0;
  for (double eps : {0.05, 0.1, 0.2}) {
    const auto r = rescale(s, eps, 1e-4);
    m = std::max(m, std::abs(r.h_tilde - 1e-4 / (eps * eps)) / r.h_tilde);
  }
  return m;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> s{
      {"symbolkit", "star product associativity", 1e-12, true, associativity},
      {"symbolkit", "h^1 term equals Poisson bracket / 2i", 1e-14, true, first_order_bracket},
      {"torusquant", "Op(a)Op(b) = Op(a#b) for polynomial symbols", 1e-12, true, quantization_product},
      {"geomflow", "H_p G = q - <q>", 1e-12, true, weight_identity},
      {"geomflow", "dI/dE = T", 1e-6, true, action_period},
      {"geomflow", "action constant on a level set", 1e-9, true, action_level_set},
      {"eiconal", "residual after realification", 1e-10, true, eiconal_residual},
      {"eiconal", "imaginary part of the actions", 1e-10, true, eiconal_real_actions},
      {"birkhoff", "x-dependent defect after conjugation", 1e-10, true, bnf_defect},
      {"birkhoff", "p_tilde stable under N -> N+1", 1e-12, true, bnf_stability},
      {"torusquant", "x-independent oracle equals the lattice", 1e-12, true, oracle_lattice},
      {"torusquant", "real symbol has real spectrum", 1e-12, true, hermitian},
      {"torusquant", "integer theta shift leaves the spectrum fixed", 1e-12, true, theta_shift},
      {"speccompare", "matching symmetric under swap", 0.0, true, match_symmetry},
      {"barriertop", "lambda = (1,1) cubic average vanishes", 0.0, true, resonant_cubic_zero},
      {"barriertop", "lambda = (1,2) average: closed form and quadrature", 1e-10, true, resonant_average},
      {"barriertop", "h_tilde = h/eps^2", 1e-15, true, rescaled_h},
  };
  return s;
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, int workers) {
  const auto& s = entries();
  SelftestReport report;
  report.checks.resize(s.size());
  parallel_for(s.size(), workers, [&](std::size_t i) {
    auto& c = report.checks[i];
    c.module = s[i].module;
    c.name = s[i].name;
    c.threshold = s[i].threshold;
    c.at_most = s[i].at_most;
    std::mt19937_64 rng(seed + 1000003ULL * i);
    try {
      c.value = s[i].run(rng);
      c.pass = c.at_most ? c.value <= c.threshold : c.value >= c.threshold;
    } catch (const std::exception& e) {
      c.value = NAN;
      c.error = e.what();
      c.pass = false;
    }
  });
  return report;
}

}  // namespace quasispec
