#include "quasispec/eiconal.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "quasispec/geomflow.hpp"
#include "quasispec/grid.hpp"
#include "quasispec/monomial.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Kept Fourier modes of an n-grid: |kⱼ| ≤ n/2 − 1 (Nyquist dropped).
int kept(int n) { return n / 2 - 1; }

std::size_t at(int k1, int k2, int n) {
  return static_cast<std::size_t>(grid::wrap(k1, n)) * n + grid::wrap(k2, n);
}

void powers(cplx w1, cplx w2, int D, std::vector<cplx>& pw) {
  // index(a1, a2) = d(d+1)/2 + a2; degree-d row from the previous one.
  pw[0] = 1.0;
  for (int d = 1; d <= D; ++d) {
    const int row = d * (d + 1) / 2;
    const int prev = (d - 1) * d / 2;
    for (int a2 = 0; a2 < d; ++a2) pw[row + a2] = pw[prev + a2] * w1;
    pw[row + d] = pw[prev + d - 1] * w2;
  }
}

}  // namespace

EiconalProblem::EiconalProblem(FourierTaylorSymbol p_eps, double eps, double eps_tilde, int grid, CVec2 zeta)
    : p_(std::move(p_eps)), eps_(eps), eps_tilde_(eps_tilde > 0.0 ? eps_tilde : std::sqrt(eps)), n_(grid),
      zeta_(zeta) {
  if (!(eps_ > 0.0 && eps_ < eps_tilde_ && eps_tilde_ < 1.0))
    throw ValidationError(fmt::format("eiconal: need 0 < eps < eps_tilde < 1 (eps={}, eps_tilde={})", eps_, eps_tilde_));
  if (n_ == 0) {
    n_ = 16;
    while (n_ < 4 * p_.K()) n_ *= 2;
  }
  if (!is_power_of_two(n_)) throw ValidationError(fmt::format("eiconal: grid {} is not a power of two", n_));
  if (n_ < 4 * p_.K())
    throw ValidationError(fmt::format("eiconal: grid {} below 4K = {}", n_, 4 * p_.K()));
  prepare();
}

EiconalProblem EiconalProblem::from_model(const Model& model, double eps, double eps_tilde, bool averaged,
                                          const TruncationCaps& caps, int grid) {
  FourierTaylorSymbol p_eps;
  if (averaged) {
    const FlowModel flow(model.p, model.q, eps);
    p_eps = averaged_symbol(flow, model.r ? &*model.r : nullptr, caps);
  } else {
    p_eps = model.principal(eps).with_bounds(std::min(caps.max_modes, model.principal(eps).K()),
                                             std::min(caps.max_degree, model.principal(eps).D()));
  }
  return EiconalProblem(std::move(p_eps), eps, eps_tilde, grid);
}

EiconalProblem EiconalProblem::recentered(CVec2 zeta) const {
  EiconalProblem out = *this;
  out.zeta_ = zeta;
  out.prepare();
  return out;
}

EiconalProblem EiconalProblem::with_eps_tilde(double eps_tilde) const {
  return EiconalProblem(p_, eps_, eps_tilde, n_, zeta_);
}

void EiconalProblem::prepare() {
  const int D = p_.D();
  nmono_ = mono::count(D);
  const int N2 = eval_grid();
  fields_.assign(static_cast<std::size_t>(N2) * N2 * nmono_, 0.0);

  // Taylor recentering at ζ: F_{m,β} = Σ_{α≥β} p_{m,α} C(α,β) ζ^{α−β}.
  std::vector<cplx> z1(static_cast<std::size_t>(D) + 1, 1.0), z2(static_cast<std::size_t>(D) + 1, 1.0);
  for (int d = 1; d <= D; ++d) {
    z1[d] = z1[d - 1] * zeta_[0];
    z2[d] = z2[d - 1] * zeta_[1];
  }
  std::vector<cplx> shifted(static_cast<std::size_t>(nmono_));
  const int K = p_.K();
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2) {
      if (p_.mode_is_zero({m1, m2})) continue;
      const auto poly = p_.mode({m1, m2});
      std::fill(shifted.begin(), shifted.end(), cplx(0.0));
      for (int ia = 0; ia < nmono_; ++ia) {
        if (poly[ia] == cplx(0.0)) continue;
        const IVec2 al = mono::exponent(ia);
        for (int b1 = 0; b1 <= al[0]; ++b1)
          for (int b2 = 0; b2 <= al[1]; ++b2)
            shifted[mono::index(b1, b2)] += poly[ia] * binomial(al[0], b1) * binomial(al[1], b2) *
                                            z1[al[0] - b1] * z2[al[1] - b2];
      }
      if (m1 == 0 && m2 == 0) {
        z_ = shifted[0];
        c_ = {D >= 1 ? shifted[1] : cplx(0.0), D >= 1 ? shifted[2] : cplx(0.0)};
        shifted[0] = 0.0;
        if (D >= 1) shifted[1] = shifted[2] = 0.0;
      }
      const std::size_t base = at(m1, m2, N2) * nmono_;
      for (int j = 0; j < nmono_; ++j)
        fields_[base + j] = shifted[j] * std::pow(eps_tilde_, mono::degree(j) - 1);
    }
  grid::synthesize(fields_, N2, nmono_);
  if (std::abs(z_beta()) < 1e-14)
    throw ValidationError("eiconal: degenerate linear part, Z beta = -2i c1 c2 vanishes");
}

void EiconalProblem::nonlinearity(const std::vector<cplx>& w, std::vector<cplx>& out) const {
  const int N2 = eval_grid();
  const std::size_t pts = static_cast<std::size_t>(N2) * N2;
  out.assign(pts, 0.0);
  std::vector<cplx> pw(static_cast<std::size_t>(nmono_));
  for (std::size_t i = 0; i < pts; ++i) {
    powers(w[2 * i], w[2 * i + 1], p_.D(), pw);
    const cplx* f = &fields_[i * nmono_];
    cplx s = 0.0;
    for (int j = 0; j < nmono_; ++j) s += f[j] * pw[j];
    out[i] = s;
  }
}

// ---------------------------------------------------------------------------

cplx EiconalSolution::coeff(int k1, int k2) const {
  if (std::max(std::abs(k1), std::abs(k2)) > kept(grid)) return 0.0;
  return psi_per[at(k1, k2, grid)];
}

CVec2 EiconalSolution::grad_per(const Vec2& x) const {
  const int L = kept(grid);
  CVec2 g{0.0, 0.0};
  for (int k1 = -L; k1 <= L; ++k1)
    for (int k2 = -L; k2 <= L; ++k2) {
      const cplx c = psi_per[at(k1, k2, grid)];
      if (c == cplx(0.0)) continue;
      const cplx e = c * std::exp(I * (k1 * x[0] + k2 * x[1]));
      g[0] += I * static_cast<double>(k1) * e;
      g[1] += I * static_cast<double>(k2) * e;
    }
  return g;
}

cplx EiconalSolution::value_per(const Vec2& x) const {
  const int L = kept(grid);
  cplx v = 0.0;
  for (int k1 = -L; k1 <= L; ++k1)
    for (int k2 = -L; k2 <= L; ++k2) {
      const cplx c = psi_per[at(k1, k2, grid)];
      if (c != cplx(0.0)) v += c * std::exp(I * (k1 * x[0] + k2 * x[1]));
    }
  return v;
}

std::vector<cplx> solve_linearized(const std::vector<cplx>& v, int n, double eps) {
  if (v.size() != static_cast<std::size_t>(n) * n) throw ValidationError("solve_linearized: size mismatch");
  if (!(eps > 0.0)) throw ValidationError("solve_linearized: eps must be positive");
  std::vector<cplx> u = v;
  grid::analyze(u, n);
  if (std::abs(u[0]) > 1e-14)
    throw ValidationError(fmt::format("solve_linearized: right-hand side has nonzero mean {:.3e}", std::abs(u[0])));
  u[0] = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == 0 && i2 == 0) continue;
      const int k1 = grid::frequency(i1, n), k2 = grid::frequency(i2, n);
      u[static_cast<std::size_t>(i1) * n + i2] /= cplx(-eps * k2, k1);
    }
  grid::synthesize(u, n);
  return u;
}

double weighted_norm(const std::vector<cplx>& coeffs, int n, double eps, double s) {
  double out = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const cplx c = coeffs[static_cast<std::size_t>(i1) * n + i2];
      if (c == cplx(0.0)) continue;
      const double k1 = grid::frequency(i1, n), k2 = grid::frequency(i2, n);
      const double w = std::pow(1.0 + k1 * k1 + k2 * k2, 0.5 * s) * std::hypot(k1 / eps, k2);
      out = std::max(out, w * std::abs(c));
    }
  return out;
}

namespace {

// ∇ψ on the evaluation grid, two interleaved components.
std::vector<cplx> gradient_on_grid(const EiconalProblem& P, const std::vector<cplx>& psi, cplx a, cplx b) {
  const int n = P.grid(), N2 = P.eval_grid(), L = kept(n);
  std::vector<cplx> g(static_cast<std::size_t>(N2) * N2 * 2, 0.0);
  for (int k1 = -L; k1 <= L; ++k1)
    for (int k2 = -L; k2 <= L; ++k2) {
      const cplx c = psi[at(k1, k2, n)];
      if (c == cplx(0.0)) continue;
      const std::size_t i = at(k1, k2, N2) * 2;
      g[i] = I * static_cast<double>(k1) * c;
      g[i + 1] = I * static_cast<double>(k2) * c;
    }
  grid::synthesize(g, N2, 2);
  const CVec2 ga = P.grad_alpha(), gb = P.grad_beta();
  const cplx l1 = a * ga[0] + b * gb[0], l2 = a * ga[1] + b * gb[1];
  for (std::size_t i = 0; i < g.size(); i += 2) {
    g[i] += l1;
    g[i + 1] += l2;
  }
  return g;
}

double eiconal_defect(const EiconalProblem& P, const std::vector<cplx>& grad) {
  const int N2 = P.eval_grid();
  const double et = P.eps_tilde();
  double sup = 0.0;
  for (int i1 = 0; i1 < N2; ++i1)
    for (int i2 = 0; i2 < N2; ++i2) {
      const std::size_t i = (static_cast<std::size_t>(i1) * N2 + i2) * 2;
      const Vec2 x{2.0 * kPi * i1 / N2, 2.0 * kPi * i2 / N2};
      const CVec2 xi{P.zeta()[0] + et * grad[i], P.zeta()[1] + et * grad[i + 1]};
      sup = std::max(sup, std::abs(P.symbol()(x, xi) - P.z()));
    }
  return sup;
}

void decay_fit(EiconalSolution& sol) {
  const int L = kept(sol.grid);
  std::vector<double> r, y;
  double first = 0.0;
  for (int s = 1; s <= L; ++s) {
    double M = 0.0;
    for (int k1 = -s; k1 <= s; ++k1)
      for (int k2 = -s; k2 <= s; ++k2)
        if (std::max(std::abs(k1), std::abs(k2)) == s) M = std::max(M, std::abs(sol.coeff(k1, k2)));
    if (s == 1) first = M;
    if (s == L) sol.tail = M;
    if (M > 1e-15 * first && M > 0.0) {
      r.push_back(s);
      y.push_back(std::log(M));
    }
  }
  if (r.size() < 2) {
    sol.decay_rate = std::numeric_limits<double>::infinity();
    return;
  }
  double mr = 0, my = 0;
  for (std::size_t i = 0; i < r.size(); ++i) mr += r[i], my += y[i];
  mr /= r.size();
  my /= r.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < r.size(); ++i) num += (r[i] - mr) * (y[i] - my), den += (r[i] - mr) * (r[i] - mr);
  sol.decay_rate = -num / den;
}

EiconalSolution iterate_impl(const EiconalProblem& P, cplx a, const EiconalOptions& opts, bool finish) {
  const int n = P.grid(), N2 = P.eval_grid(), L = kept(n);
  const CVec2 c = P.c();
  const cplx zb = P.z_beta();

  EiconalSolution sol;
  sol.grid = n;
  sol.a = a;
  sol.psi_per.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<cplx> next(sol.psi_per.size()), G, diff(sol.psi_per.size());
  int stalled = 0;
  bool converged = false;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const auto grad = gradient_on_grid(P, sol.psi_per, a, sol.b);
    P.nonlinearity(grad, G);
    grid::analyze(G, N2);
    const cplx b_next = -G[0] / zb;
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (int k1 = -L; k1 <= L; ++k1)
      for (int k2 = -L; k2 <= L; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        const cplx div = I * (static_cast<double>(k1) * c[0] + static_cast<double>(k2) * c[1]);
        if (std::abs(div) < 1e-14)
          throw NumericalError(fmt::format("eiconal: vanishing divisor at k=({},{})", k1, k2));
        next[at(k1, k2, n)] = -G[at(k1, k2, N2)] / div;
      }
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = next[i] - sol.psi_per[i];
    const double delta = weighted_norm(diff, n, P.eps(), opts.sobolev_s) + std::abs(b_next - sol.b);
    sol.psi_per.swap(next);
    sol.b = b_next;
    sol.iterations = it;

    if (!sol.corrections.empty()) {
      const double prev = sol.corrections.back();
      const double ratio = prev > 0.0 ? delta / prev : 0.0;
      if (prev > 100.0 * opts.tolerance) sol.contraction = std::max(sol.contraction, ratio);
      stalled = ratio >= 1.0 ? stalled + 1 : 0;
      if (stalled >= opts.stall_steps)
        throw NumericalError(fmt::format(
            "eiconal: iteration not contracting, correction ratio {:.3g} for {} steps (eps/eps_tilde + eps_tilde = {:.3g})",
            ratio, stalled, P.eps() / P.eps_tilde() + P.eps_tilde()));
    }
    sol.corrections.push_back(delta);
    if (delta <= opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError(fmt::format("eiconal: not converged after {} iterations (last correction {:.3e})",
                                     opts.max_iterations, sol.corrections.back()));
  sol.bound = std::abs(sol.b) + weighted_norm(sol.psi_per, n, P.eps(), opts.sobolev_s);
  if (finish) {
    sol.residual = eiconal_defect(P, gradient_on_grid(P, sol.psi_per, a, sol.b));
    decay_fit(sol);
  }
  return sol;
}

}  // namespace

EiconalSolution iterate_schema(const EiconalProblem& problem, cplx a, const EiconalOptions& opts) {
  return iterate_impl(problem, a, opts, true);
}

Actions compute_actions(const EiconalSolution& sol, const EiconalProblem& P) {
  const double et = P.eps_tilde();
  const CVec2 c = P.c();
  Actions A;
  A.I1 = 2.0 * kPi * et * (c[1] / I) * (sol.a + sol.b) + 2.0 * kPi * P.zeta()[0];
  A.I2 = 2.0 * kPi * et * I * c[0] * (sol.a - sol.b) + 2.0 * kPi * P.zeta()[1];

  // ξ·dx along x₁- and x₂-cycles displaced off the coordinate axes.
  const CVec2 ga = P.grad_alpha(), gb = P.grad_beta();
  auto xi = [&](const Vec2& x, int j) {
    const CVec2 g = sol.grad_per(x);
    return P.zeta()[static_cast<std::size_t>(j)] +
           et * (g[static_cast<std::size_t>(j)] + sol.a * ga[static_cast<std::size_t>(j)] +
                 sol.b * gb[static_cast<std::size_t>(j)]);
  };
  using Rule = boost::math::quadrature::gauss<double, 20>;
  auto cycle = [&](int j, double offset) {
    cplx total = 0.0;
    const int panels = 8;
    for (int s = 0; s < panels; ++s) {
      const double lo = 2.0 * kPi * s / panels, hi = 2.0 * kPi * (s + 1) / panels;
      auto point = [&](double t) { return j == 0 ? Vec2{t, offset} : Vec2{offset, t}; };
      total += cplx(Rule::integrate([&](double t) { return xi(point(t), j).real(); }, lo, hi),
                    Rule::integrate([&](double t) { return xi(point(t), j).imag(); }, lo, hi));
    }
    return total;
  };
  const cplx q1 = cycle(0, 0.7), q2 = cycle(1, 0.3);
  A.quadrature_mismatch = std::max(std::abs(q1 - A.I1), std::abs(q2 - A.I2));
  if (A.quadrature_mismatch > 1e-8)
    throw NumericalError(fmt::format("compute_actions: quadrature and closed form disagree by {:.3e}",
                                     A.quadrature_mismatch));
  return A;
}

Realified realify_actions(const EiconalProblem& P, const EiconalOptions& opts, double fd_step, int max_steps) {
  const double s1 = 2.0 * kPi * P.eps_tilde() * P.eps(), s2 = 2.0 * kPi * P.eps_tilde();
  auto closed = [&](const EiconalSolution& sol) {
    const CVec2 c = P.c();
    const cplx I1 = 2.0 * kPi * P.eps_tilde() * (c[1] / I) * (sol.a + sol.b) + 2.0 * kPi * P.zeta()[0];
    const cplx I2 = 2.0 * kPi * P.eps_tilde() * I * c[0] * (sol.a - sol.b) + 2.0 * kPi * P.zeta()[1];
    return std::array<double, 2>{I1.imag() / s1, I2.imag() / s2};
  };
  auto residual = [&](cplx a) { return closed(iterate_impl(P, a, opts, false)); };

  cplx a = 0.0;
  for (int step = 0; step <= max_steps; ++step) {
    const auto R = residual(a);
    if (std::abs(R[0]) * s1 <= 1e-13 && std::abs(R[1]) * s2 <= 1e-13) {
      Realified out{a, iterate_schema(P, a, opts), {}, step};
      out.actions = compute_actions(out.solution, P);
      return out;
    }
    if (step == max_steps) break;
    std::array<std::array<double, 2>, 2> J{};
    for (int v = 0; v < 2; ++v) {
      const cplx d = v == 0 ? cplx(fd_step) : cplx(0.0, fd_step);
      const auto Rp = residual(a + d), Rm = residual(a - d);
      for (int r = 0; r < 2; ++r) J[r][v] = (Rp[r] - Rm[r]) / (2.0 * fd_step);
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (std::abs(det) < 1e-300) throw NumericalError("realify_actions: singular Jacobian");
    const double d_re = -(J[1][1] * R[0] - J[0][1] * R[1]) / det;
    const double d_im = -(-J[1][0] * R[0] + J[0][0] * R[1]) / det;
    a += cplx(d_re, d_im);
    if (std::abs(cplx(d_re, d_im)) < 1e-15) {
      Realified out{a, iterate_schema(P, a, opts), {}, step + 1};
      out.actions = compute_actions(out.solution, P);
      return out;
    }
  }
  throw NumericalError(fmt::format("realify_actions: Newton did not converge in {} steps", max_steps));
}

FamilyPoint solve_family_point(const EiconalProblem& base, const Vec2& eta, const EiconalOptions& opts) {
  FamilyPoint pt;
  pt.eta = eta;
  CVec2 zeta{eta[0], eta[1]};
  for (int it = 0; it < 100; ++it) {
    const EiconalProblem P = base.recentered(zeta);
    auto sol = iterate_impl(P, 0.0, opts, false);
    const CVec2 gb = P.grad_beta();
    const CVec2 next{eta[0] - P.eps_tilde() * sol.b * gb[0], eta[1] - P.eps_tilde() * sol.b * gb[1]};
    const double step = std::max(std::abs(next[0] - zeta[0]), std::abs(next[1] - zeta[1]));
    zeta = next;
    if (step < 1e-15) {
      const EiconalProblem Q = base.recentered(zeta);
      pt.zeta = zeta;
      pt.p_tilde = Q.z();
      pt.solution = iterate_schema(Q, 0.0, opts);
      return pt;
    }
  }
  throw NumericalError(fmt::format("solve_family: zeta fixed point not converged at eta=({}, {})", eta[0], eta[1]));
}

std::vector<FamilyPoint> solve_family(const EiconalProblem& base, const std::vector<Vec2>& etas,
                                      const EiconalOptions& opts, int workers) {
  std::vector<FamilyPoint> out(etas.size());
  parallel_for(etas.size(), workers, [&](std::size_t i) {
    try {
      out[i] = solve_family_point(base, etas[i], opts);
    } catch (const Error& e) {
      out[i].eta = etas[i];
      out[i].error = e.what();
    }
  });
  return out;
}

Displacement kappa_displacement(const EiconalProblem& base, const Vec2& eta, const EiconalOptions& opts,
                                double fd_step, int samples) {
  const auto center = solve_family_point(base, eta, opts);
  std::array<std::array<EiconalSolution, 2>, 2> side;
  for (int j = 0; j < 2; ++j)
    for (int s = 0; s < 2; ++s) {
      Vec2 e = eta;
      e[static_cast<std::size_t>(j)] += (s == 0 ? 1.0 : -1.0) * fd_step;
      side[j][s] = *solve_family_point(base, e, opts).solution;
    }
  const double et = base.eps_tilde();
  Displacement d;
  for (int i1 = 0; i1 < samples; ++i1)
    for (int i2 = 0; i2 < samples; ++i2) {
      const Vec2 x{2.0 * kPi * i1 / samples, 2.0 * kPi * i2 / samples};
      const CVec2 g = center.solution->grad_per(x);
      d.dxi1 = std::max(d.dxi1, std::abs(et * g[0]));
      d.dxi2 = std::max(d.dxi2, std::abs(et * g[1]));
      double y2 = 0.0;
      for (int j = 0; j < 2; ++j) {
        const cplx dphi = et * (side[j][0].value_per(x) - side[j][1].value_per(x)) / (2.0 * fd_step);
        y2 += std::norm(dphi);
      }
      d.dx = std::max(d.dx, std::sqrt(y2));
    }
  return d;
}

}  // namespace quasispec
