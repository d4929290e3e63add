#include "quasispec/geomflow.hpp"

#include <cmath>
#include <memory>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "quasispec/birkhoff.hpp"

namespace quasispec {

namespace odeint = boost::numeric::odeint;

FlowModel::FlowModel(FourierTaylorSymbol p, FourierTaylorSymbol q, double epsilon)
    : p_(std::move(p)), q_(std::move(q)), epsilon_(epsilon) {
  if (!p_.is_x_independent()) throw ValidationError("FlowModel: p must be x-independent in the normal-form chart");
  p_.for_each([](IVec2, IVec2 a, cplx) {
    if (a[1] != 0) throw ValidationError("FlowModel: p must depend on xi_1 only");
  });
  if (std::abs(p_.coeff({0, 0}, {1, 0})) < 1e-14)
    throw ValidationError("FlowModel: nondegeneracy violated: dp/dxi_1(0) = 0");
  if (!(epsilon_ >= 0.0)) throw ValidationError("FlowModel: epsilon must be nonnegative");
}

void FlowModel::require_prediction_ready() const {
  if (std::abs(flow_average(q_).coeff({0, 0}, {0, 1})) < 1e-14)
    throw ValidationError("FlowModel: nondegeneracy violated: d<q>/dxi_2(0) = 0");
}

FourierTaylorSymbol flow_average(const FourierTaylorSymbol& q) {
  FourierTaylorSymbol out(q.K(), q.D());
  q.for_each([&](IVec2 m, IVec2 a, cplx c) {
    if (m[0] == 0) out.set(m, a, c);
  });
  return out;
}

FourierTaylorSymbol flow_average(const FourierTaylorSymbol& q, const FlowModel&) { return flow_average(q); }

FourierTaylorSymbol weight_G(const FlowModel& model, int D, double floor) {
  // With p = p(ξ₁) the divisor i m·∂_ξp reduces to i m₁ p′(ξ₁).
  return cohomological_solve(model.p(), model.q() - flow_average(model.q()), D, floor);
}

double weight_residual(const FlowModel& model, const FourierTaylorSymbol& G, int D) {
  const TruncationCaps caps{std::max(G.K(), model.q().K()) + model.p().K(), D, 0.0};
  const auto lhs = poisson_bracket(model.p(), G, caps);
  const auto rhs = (model.q() - flow_average(model.q())).with_bounds(model.q().K(), std::min(D, model.q().D()));
  return (lhs - rhs).norm_max();
}

FourierTaylorSymbol pullback(const FourierTaylorSymbol& f, const FourierTaylorSymbol& G, cplx t,
                             const TruncationCaps& caps, TruncationInfo* info, double tolerance, int max_terms) {
  FourierTaylorSymbol result = f;
  if (G.is_zero() || t == cplx(0.0)) return result;
  const double scale = std::max(f.norm_l1(), 1e-300);
  FourierTaylorSymbol term = f;
  for (int k = 1; k <= max_terms; ++k) {
    term = (t / static_cast<double>(k)) * poisson_bracket(G, term, caps, info);
    result += term;
    if (term.norm_l1() < tolerance * scale) {
      result.canonicalize(caps.drop_threshold);
      return result;
    }
  }
  throw NumericalError(fmt::format("pullback: Lie series not converged after {} terms", max_terms));
}

FourierTaylorSymbol averaged_symbol(const FlowModel& model, const FourierTaylorSymbol* r, const TruncationCaps& caps,
                                    TruncationInfo* info) {
  const double eps = model.epsilon();
  auto f = model.p() + (I * eps) * model.q();
  if (r) f += (eps * eps) * *r;
  const auto G = weight_G(model, caps.max_degree);
  return pullback(f, G, I * eps, caps, info);
}

// ---------------------------------------------------------------------------

Hamiltonian make_hamiltonian(const FourierTaylorSymbol& p) {
  struct Parts {
    FourierTaylorSymbol p, px1, px2, pxi1, pxi2;
  };
  auto parts = std::make_shared<Parts>(Parts{p, d_x(p, 0), d_x(p, 1), d_xi(p, 0), d_xi(p, 1)});
  Hamiltonian H;
  H.periodic_x = true;
  H.value = [parts](const PhasePoint& r) { return parts->p({r[0], r[1]}, {r[2], r[3]}).real(); };
  H.field = [parts](const PhasePoint& r) {
    const Vec2 x{r[0], r[1]};
    const CVec2 xi{r[2], r[3]};
    return PhasePoint{parts->pxi1(x, xi).real(), parts->pxi2(x, xi).real(), -parts->px1(x, xi).real(),
                      -parts->px2(x, xi).real()};
  };
  return H;
}

Hamiltonian make_hamiltonian(const PhasePolynomial& p) {
  auto parts = std::make_shared<std::array<PhasePolynomial, 5>>(
      std::array<PhasePolynomial, 5>{p, p.derivative(0), p.derivative(1), p.derivative(2), p.derivative(3)});
  Hamiltonian H;
  H.periodic_x = false;
  H.value = [parts](const PhasePoint& r) { return (*parts)[0](r).real(); };
  H.field = [parts](const PhasePoint& r) {
    const auto& d = *parts;
    return PhasePoint{d[3](r).real(), d[4](r).real(), -d[1](r).real(), -d[2](r).real()};
  };
  return H;
}

namespace {

// Phase point plus the running action ∫ ξ·ẋ dt.
using State = std::array<double, 5>;

class FlowIntegrator {
 public:
  FlowIntegrator(const Hamiltonian& H, const PhasePoint& rho0, const FlowOptions& opts)
      : H_(H), opts_(opts), stepper_(odeint::make_dense_output(opts.tolerance, opts.tolerance,
                                                              odeint::runge_kutta_dopri5<State>())) {
    State s{rho0[0], rho0[1], rho0[2], rho0[3], 0.0};
    stepper_.initialize(s, 0.0, 1e-2);
  }

  void rhs(const State& s, State& ds) const {
    const PhasePoint f = H_.field({s[0], s[1], s[2], s[3]});
    ds = {f[0], f[1], f[2], f[3], s[2] * f[0] + s[3] * f[1]};
  }

  // Advances one adaptive step; returns (t_prev, t_now).
  std::pair<double, double> step() {
    auto sys = [this](const State& s, State& ds, double) { rhs(s, ds); };
    const auto [t0, t1] = stepper_.do_step(sys);
    check_box(stepper_.current_state());
    if (t1 > opts_.max_time) throw NumericalError("hamilton_flow: exceeded the maximum integration time");
    return {t0, t1};
  }

  double time() const { return stepper_.current_time(); }
  double previous_time() const { return stepper_.previous_time(); }

  State at(double t) {
    State s;
    stepper_.calc_state(t, s);
    return s;
  }

  PhasePoint field(const State& s) const { return H_.field({s[0], s[1], s[2], s[3]}); }

 private:
  void check_box(const State& s) const {
    const bool xi_out = std::abs(s[2]) > opts_.box || std::abs(s[3]) > opts_.box;
    const bool x_out = !H_.periodic_x && (std::abs(s[0]) > opts_.box || std::abs(s[1]) > opts_.box);
    if (xi_out || x_out || !std::isfinite(s[0] + s[1] + s[2] + s[3]))
      throw NumericalError(
          fmt::format("hamilton_flow: trajectory left the validity box (|coordinate| > {})", opts_.box));
  }

  const Hamiltonian& H_;
  FlowOptions opts_;
  odeint::dense_output_runge_kutta<odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>>> stepper_;
};

PhasePoint wrap_torus(PhasePoint p) {
  for (int j = 0; j < 2; ++j) {
    p[static_cast<std::size_t>(j)] = std::fmod(p[static_cast<std::size_t>(j)], 2.0 * kPi);
    if (p[static_cast<std::size_t>(j)] < 0.0) p[static_cast<std::size_t>(j)] += 2.0 * kPi;
  }
  return p;
}

}  // namespace

PhasePoint hamilton_flow(const Hamiltonian& H, const PhasePoint& rho0, double t, const FlowOptions& opts) {
  if (!(t >= 0.0)) throw ValidationError("hamilton_flow: t must be nonnegative");
  PhasePoint out = rho0;
  if (t > 0.0) {
    FlowIntegrator flow(H, rho0, opts);
    while (flow.time() < t) flow.step();
    const State s = flow.at(t);
    out = {s[0], s[1], s[2], s[3]};
  }
  return H.periodic_x ? wrap_torus(out) : out;
}

ClosedOrbit closed_orbit(const Hamiltonian& H, const PhasePoint& rho0, const FlowOptions& opts) {
  FlowIntegrator flow(H, rho0, opts);
  auto finish = [&](double T) {
    const State s = flow.at(T);
    return ClosedOrbit{T, s[4], {s[0], s[1], s[2], s[3]}};
  };

  if (H.periodic_x) {
    const double v = H.field(rho0)[0];
    if (std::abs(v) < 1e-14) throw NumericalError("closed_orbit: no x_1 motion, period detection failed");
    const double target = rho0[0] + (v > 0 ? 2.0 * kPi : -2.0 * kPi);
    auto g = [&](double t) { return flow.at(t)[0] - target; };
    for (;;) {
      const auto [t0, t1] = flow.step();
      if (g(t0) * g(t1) > 0.0) continue;
      double lo = t0, hi = t1, t = 0.5 * (t0 + t1);
      for (int it = 0; it < 60; ++it) {
        const State s = flow.at(t);
        const double gt = s[0] - target;
        if (std::abs(gt) < 1e-15) break;
        ((gt > 0) == (v > 0) ? hi : lo) = t;
        double next = t - gt / flow.field(s)[0];
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-15 * std::max(1.0, t)) {
          t = next;
          break;
        }
        t = next;
      }
      return finish(t);
    }
  }

  // Off the torus: first local minimum of |ρ(t) − ρ₀|² after leaving ρ₀'s neighborhood.
  double scale = 0.0;
  for (double c : rho0) scale = std::max(scale, std::abs(c));
  scale = std::max(scale, 1e-3);
  auto dist2 = [&](const State& s) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += (s[static_cast<std::size_t>(i)] - rho0[static_cast<std::size_t>(i)]) *
                                     (s[static_cast<std::size_t>(i)] - rho0[static_cast<std::size_t>(i)]);
    return d;
  };
  auto ddist2 = [&](double t) {
    const State s = flow.at(t);
    const PhasePoint f = flow.field(s);
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += 2.0 * (s[static_cast<std::size_t>(i)] - rho0[static_cast<std::size_t>(i)]) * f[static_cast<std::size_t>(i)];
    return d;
  };
  bool left = false;
  for (;;) {
    const auto [t0, t1] = flow.step();
    if (!left) {
      left = dist2(flow.at(t1)) > 1e-2 * scale * scale;
      continue;
    }
    if (!(ddist2(t0) < 0.0 && ddist2(t1) >= 0.0)) continue;
    double lo = t0, hi = t1;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (ddist2(mid) < 0.0 ? lo : hi) = mid;
    }
    const double T = 0.5 * (lo + hi);
    if (std::sqrt(dist2(flow.at(T))) < 1e-6 * scale) return finish(T);
  }
}

ActionPeriodReport action_period_check(const FourierTaylorSymbol& p, const std::vector<double>& E_grid,
                                       double delta_E, const FlowOptions& opts) {
  const FlowModel model(p, FourierTaylorSymbol(0, 0), 0.0);
  const Hamiltonian H = make_hamiltonian(p);
  const auto dp = d_xi(p, 0);
  auto xi_of = [&](double E) {
    double xi = E / p.coeff({0, 0}, {1, 0}).real();
    for (int it = 0; it < 100; ++it) {
      const double f = p({0, 0}, {xi, 0.0}).real() - E;
      const double step = f / dp({0, 0}, {xi, 0.0}).real();
      xi -= step;
      if (std::abs(step) < 1e-16) break;
    }
    return xi;
  };
  auto orbit = [&](double E) { return closed_orbit(H, {0.0, 0.0, xi_of(E), 0.0}, opts); };

  ActionPeriodReport rep;
  for (double E : E_grid) {
    const auto c = orbit(E);
    const double Ip = orbit(E + 0.5 * delta_E).action;
    const double Im = orbit(E - 0.5 * delta_E).action;
    const double dIdE = (Ip - Im) / delta_E;
    ActionPeriodRow row{E, c.action, c.period, dIdE, std::abs(dIdE - c.period)};
    rep.max_defect = std::max(rep.max_defect, row.defect);
    rep.rows.push_back(row);
  }
  return rep;
}

double action_spread(const Hamiltonian& H, const std::vector<PhasePoint>& starts, const FlowOptions& opts) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : starts) {
    const double I = closed_orbit(H, s, opts).action;
    lo = std::min(lo, I);
    hi = std::max(hi, I);
  }
  return starts.empty() ? 0.0 : hi - lo;
}

}  // namespace quasispec
