#include "quasispec/birkhoff.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace quasispec {

FourierTaylorSymbol x_mean(const FourierTaylorSymbol& s) {
  FourierTaylorSymbol out(0, s.D());
  const auto src = s.mode({0, 0});
  std::copy(src.begin(), src.end(), out.mode({0, 0}).begin());
  return out;
}

FourierTaylorSymbol x_oscillating(const FourierTaylorSymbol& s) {
  FourierTaylorSymbol out = s;
  for (cplx& c : out.mode({0, 0})) c = 0.0;
  return out;
}

namespace {

double reciprocal_radius(const FourierTaylorSymbol& g) {
  const auto p = g.mode({0, 0});
  std::vector<double> shell(static_cast<std::size_t>(g.D()) + 1, 0.0);
  for (int j = 0; j < g.monomials(); ++j) shell[static_cast<std::size_t>(mono::degree(j))] += std::abs(p[j]);
  for (int d = g.D(); d >= 1; --d)
    if (shell[static_cast<std::size_t>(d)] > 0.0) return std::pow(shell[0] / shell[static_cast<std::size_t>(d)], 1.0 / d);
  return std::numeric_limits<double>::infinity();
}

}  // namespace

FourierTaylorSymbol cohomological_solve(const FourierTaylorSymbol& p0, const FourierTaylorSymbol& b, int D,
                                        double floor, std::vector<DivisorRecord>* divisors, int order) {
  if (!p0.is_x_independent()) throw ValidationError("cohomological_solve: p0 must be x-independent");
  const auto dp1 = d_xi(p0, 0);
  const auto dp2 = d_xi(p0, 1);
  FourierTaylorSymbol a(b.K(), D);
  const auto table = mono::product_table(b.D(), D, D);
  for (int m1 = -b.K(); m1 <= b.K(); ++m1)
    for (int m2 = -b.K(); m2 <= b.K(); ++m2) {
      if ((m1 == 0 && m2 == 0) || b.mode_is_zero({m1, m2})) continue;
      const auto divisor = (I * static_cast<double>(m1)) * dp1 + (I * static_cast<double>(m2)) * dp2;
      FourierTaylorSymbol g;
      try {
        g = taylor_reciprocal(divisor, D, floor);
      } catch (const NumericalError& e) {
        throw NumericalError(fmt::format("cohomological_solve: order {}, mode ({},{}): {}", order, m1, m2, e.what()));
      }
      if (divisors) divisors->push_back({order, {m1, m2}, reciprocal_radius(g)});
      const auto pb = b.mode({m1, m2});
      const auto pg = g.mode({0, 0});
      auto pa = a.mode({m1, m2});
      for (const auto& e : table) pa[e.k] += pb[e.i] * pg[e.j];
    }
  return a;
}

namespace {

double oscillating_max(const FourierTaylorSymbol& s) { return x_oscillating(s).norm_max(); }

void note_radii(NormalFormResult& r, std::size_t from, double limit) {
  for (std::size_t i = from; i < r.divisors.size(); ++i) {
    const auto& d = r.divisors[i];
    if (d.radius < limit)
      r.warnings.push_back(fmt::format("divisor expansion at order {}, mode ({},{}) has estimated radius {:.3g} < {:.3g}",
                                       d.order, d.m[0], d.m[1], d.radius, limit));
  }
}

}  // namespace

NormalFormResult normal_form(const HSeries& P, int N, double eps, const NormalFormOptions& opts) {
  if (N < 0) throw ValidationError("normal_form: N must be nonnegative");
  if (P.order() < 0) throw ValidationError("normal_form: empty symbol series");
  NormalFormResult r;
  r.epsilon = eps;
  const int D = opts.caps.max_degree;

  // Constants commute with everything: strip them and add them back at the end.
  HSeries Q(N);
  std::vector<cplx> constants(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 0; n <= std::min(N, P.order()); ++n) {
    Q[n] = P[n];
    constants[static_cast<std::size_t>(n)] = Q[n].coeff({0, 0}, {0, 0});
    if (Q[n].contains({0, 0}, {0, 0})) Q[n].set({0, 0}, {0, 0}, 0.0);
  }

  // Classical stage: Newton iteration with generators at h⁻¹.
  double last = std::numeric_limits<double>::infinity();
  for (int step = 0;; ++step) {
    const auto R = x_oscillating(Q[0]);
    const double size = R.norm_l1();
    if (size <= opts.classical_tolerance || (size < 1e-11 && size > 0.5 * last)) break;
    if (step == opts.classical_max_steps)
      throw NumericalError(fmt::format("normal_form: classical stage did not converge in {} steps (residual {:.3e})",
                                       step, size));
    last = size;
    const std::size_t mark = r.divisors.size();
    const auto g = cohomological_solve(x_mean(Q[0]), I * R, D, opts.divisor_floor, &r.divisors, -1);
    note_radii(r, mark, opts.validity_radius);
    Q = moyal_conjugation_step(Q, g, -1, N, opts.caps, &r.truncation, opts.conjugation);
    r.classical_growth += gradient_norm(g, opts.growth_radius);
    r.classical_generators.push_back(g);
  }

  const auto p0 = x_mean(Q[0]);
  for (int n = 0; n < N; ++n) {
    const std::size_t mark = r.divisors.size();
    const auto a = cohomological_solve(p0, I * x_oscillating(Q[n + 1]), D, opts.divisor_floor, &r.divisors, n);
    note_radii(r, mark, opts.validity_radius);
    if (!a.is_zero()) Q = moyal_conjugation_step(Q, a, n, N, opts.caps, &r.truncation, opts.conjugation);
    r.growth_log.push_back(gradient_norm(a, opts.growth_radius));
    r.generators.push_back(a);
  }

  for (int n = 0; n <= N; ++n) {
    auto pt = x_mean(Q[n]);
    const cplx c = constants[static_cast<std::size_t>(n)];
    if (c != cplx(0.0)) pt.add({0, 0}, {0, 0}, c);
    r.p_tilde.push_back(std::move(pt));
    r.x_defect.push_back(oscillating_max(Q[n]));
  }
  r.conjugated = std::move(Q);
  return r;
}

double gradient_norm(const FourierTaylorSymbol& a, double r) {
  double s = 0.0;
  a.for_each([&](IVec2 m, IVec2 al, cplx c) {
    const int d = al[0] + al[1];
    s += std::abs(c) * std::pow(r, d) * (std::abs(m[0]) + std::abs(m[1]) + d / r);
  });
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<GrowthRow> growth_report(const std::vector<NormalFormResult>& runs) {
  std::vector<GrowthRow> rows;
  if (runs.empty()) return rows;
  std::size_t orders = runs.front().growth_log.size();
  for (const auto& r : runs) orders = std::min(orders, r.growth_log.size());

  auto finish = [](GrowthRow& row) {
    std::vector<double> e, v;
    for (std::size_t i = 0; i < row.norms.size(); ++i)
      if (row.norms[i] > 0.0) {
        e.push_back(row.eps[i]);
        v.push_back(row.norms[i]);
      }
    row.exact_zero = v.empty();
    if (row.exact_zero) {
      row.pass = true;
      return;
    }
    row.slope = e.size() >= 2 ? loglog_slope(e, v) : 0.0;
    row.pass = !row.bound || (e.size() >= 2 && row.slope >= *row.bound);
  };

  GrowthRow classical{-1, {}, {}, 0.0, std::nullopt, false, true};
  for (const auto& r : runs) {
    classical.eps.push_back(r.epsilon);
    classical.norms.push_back(r.classical_growth);
  }
  finish(classical);
  rows.push_back(classical);

  for (std::size_t n = 0; n < orders; ++n) {
    GrowthRow row{static_cast<int>(n), {}, {}, 0.0, -(1.0 + 2.0 * static_cast<double>(n)), false, true};
    for (const auto& r : runs) {
      row.eps.push_back(r.epsilon);
      row.norms.push_back(r.growth_log[n]);
    }
    finish(row);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace quasispec
