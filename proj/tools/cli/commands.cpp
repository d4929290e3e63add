#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "quasispec/artifacts.hpp"
#include "quasispec/barriertop.hpp"
#include "quasispec/birkhoff.hpp"
#include "quasispec/eiconal.hpp"
#include "quasispec/parallel.hpp"
#include "quasispec/selftest.hpp"
#include "quasispec/speccompare.hpp"
#include "quasispec/symbol_json.hpp"

namespace quasispec::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json rect_json(const SpectralRectangle& r) {
  return {{"re_center", r.re_center},
          {"re_half_width", r.re_half_width},
          {"im_center_over_eps", r.im_center_over_eps},
          {"im_half_width_over_eps", r.im_half_width_over_eps}};
}

// One file per h when several are configured.
std::string per_h(const std::string& stem, const std::string& ext, std::size_t i, std::size_t n) {
  return n == 1 ? stem + ext : fmt::format("{}_h{}{}", stem, i, ext);
}

NormalFormOptions nf_options(const ScenarioConfig& c) {
  NormalFormOptions o;
  o.caps = c.caps;
  o.divisor_floor = c.divisor_floor;
  return o;
}

NormalFormResult run_normal_form(const ScenarioConfig& c, std::ostream& log) {
  const auto t0 = Clock::now();
  auto nf = normal_form(c.model.operator_symbol(c.epsilon), c.N, c.epsilon, nf_options(c));
  fmt::print(log, "birkhoff: N = {}, eps = {}, {:.2f} s\n", c.N, c.epsilon,
             std::chrono::duration<double>(Clock::now() - t0).count());
  for (const auto& w : nf.warnings) fmt::print(log, "birkhoff: warning: {}\n", w);
  return nf;
}

CompareOptions compare_options(const ScenarioConfig& c) {
  CompareOptions o;
  o.shrink = c.shrink;
  o.M = c.M;
  o.workers = c.workers;
  return o;
}

json report_json(const MatchReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"k", p.k}, {"pred", cjson(p.z_pred)}, {"oracle", cjson(p.z_oracle)}, {"error", p.error}});
  json up = json::array(), uo = json::array();
  for (const auto& p : r.unmatched_pred) up.push_back({{"k", p.k}, {"z", cjson(p.z)}});
  for (cplx z : r.unmatched_oracle) uo.push_back(cjson(z));
  return {{"sup_error", r.sup_error},         {"mean_error", r.mean_error},   {"inner_pairs", r.inner_pairs},
          {"inner_pred", r.inner_pred},       {"inner_oracle", r.inner_oracle}, {"inner_unmatched", r.inner_unmatched},
          {"counts_agree", r.counts_agree()}, {"cost_cap", r.cost_cap},       {"pairs", pairs},
          {"unmatched_pred", up},             {"unmatched_oracle", uo}};
}

json window_json(const QuantizationWindow& w, const TrustReport& t) {
  return {{"M", w.M},
          {"dimension", w.dimension()},
          {"theta", w.theta},
          {"h", w.h},
          {"trusted", t.pass},
          {"margin", t.margin},
          {"band_width", t.band_width}};
}

// ---------------------------------------------------------------------------

int cmd_eiconal(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto P = EiconalProblem::from_model(c.model, c.epsilon, c.epsilon_tilde);
  EiconalOptions opts;
  opts.tolerance = c.eiconal_tolerance;
  const auto R = realify_actions(P, opts);
  const auto& s = R.solution;
  fmt::print(log, "eiconal: eps = {}, eps_tilde = {}, grid {}, residual {:.3e}, contraction {:.3e}, a* = {}{:+}i\n",
             P.eps(), P.eps_tilde(), P.grid(), s.residual, s.contraction, R.a_star.real(), R.a_star.imag());

  json corr = s.corrections;
  out.json("eiconal.json", {{"eps", P.eps()},
                            {"eps_tilde", P.eps_tilde()},
                            {"grid", P.grid()},
                            {"z", cjson(P.z())},
                            {"c", {cjson(P.c()[0]), cjson(P.c()[1])}},
                            {"a_star", cjson(R.a_star)},
                            {"b", cjson(s.b)},
                            {"I1", cjson(R.actions.I1)},
                            {"I2", cjson(R.actions.I2)},
                            {"quadrature_mismatch", R.actions.quadrature_mismatch},
                            {"newton_steps", R.newton_steps},
                            {"residual", s.residual},
                            {"iterations", s.iterations},
                            {"contraction", s.contraction},
                            {"bound", s.bound},
                            {"decay_rate", s.decay_rate},
                            {"tail", s.tail},
                            {"corrections", corr}});

  // ψ_per as a symbol with no ξ-dependence
  const int kmax = s.grid / 2 - 1;
  FourierTaylorSymbol psi(kmax, 0);
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) psi.set({k1, k2}, {0, 0}, s.coeff(k1, k2));
  out.json("psi.json", symbol_to_json(psi));

  const auto family = solve_family(P, c.eta.etas(), opts, c.workers);
  CsvTable table({"eta1", "eta2", "re_p_tilde", "im_p_tilde"});
  int failures = 0;
  for (const auto& f : family) {
    if (f.error) {
      ++failures;
      fmt::print(log, "eiconal: eta = ({}, {}): {}\n", f.eta[0], f.eta[1], *f.error);
    }
    table.add_row({num(f.eta[0]), num(f.eta[1]), num(f.error ? NAN : f.p_tilde.real()),
                   num(f.error ? NAN : f.p_tilde.imag())});
  }
  out.csv("p_tilde.csv", table);
  return failures ? kExitNumerical : kExitOk;
}

int cmd_bnf(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto nf = run_normal_form(c, log);
  out.json("bnf.json", normal_form_to_json(nf));

  std::vector<NormalFormResult> runs(c.growth_eps.size());
  parallel_for(runs.size(), c.workers, [&](std::size_t i) {
    const double e = c.growth_eps[i];
    runs[i] = normal_form(c.model.operator_symbol(e), c.N, e, nf_options(c));
  });
  const auto rows = growth_report(runs);
  CsvTable norms({"n", "eps", "gradient_norm"});
  CsvTable slopes({"n", "slope", "bound", "exact_zero", "pass"});
  bool pass = true;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.eps.size(); ++i) norms.add_row({num(r.n), num(r.eps[i]), num(r.norms[i])});
    slopes.add_row({num(r.n), num(r.slope), r.bound ? num(*r.bound) : "", num(int(r.exact_zero)), num(int(r.pass))});
    fmt::print(log, "birkhoff: growth n = {}: slope {:.3f}{}{}\n", r.n, r.slope,
               r.bound ? fmt::format(" (bound {})", *r.bound) : "", r.exact_zero ? " exact zero" : "");
    pass = pass && r.pass;
  }
  out.csv("growth.csv", norms);
  out.csv("growth_slopes.csv", slopes);
  return kExitOk;
}

int cmd_predict(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto nf = run_normal_form(c, log);
  const auto hs = c.hs();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto lat = quasi_eigenvalues(nf.p_tilde, hs[i], c.model.floquet, c.model.rect, c.epsilon);
    CsvTable table({"k1", "k2", "re_z", "im_z"});
    json pts = json::array();
    for (const auto& p : lat.points) {
      table.add_row({num(p.k[0]), num(p.k[1]), num(p.z.real()), num(p.z.imag())});
      pts.push_back({{"k", p.k}, {"z", cjson(p.z)}});
    }
    out.csv(per_h("lattice", ".csv", i, hs.size()), table);
    out.json(per_h("lattice", ".json", i, hs.size()),
             {{"h", hs[i]},
              {"eps", c.epsilon},
              {"N", c.N},
              {"S", c.model.floquet.S},
              {"alpha0", c.model.floquet.alpha0},
              {"theta", floquet_shift(c.model.floquet, hs[i])},
              {"rectangle", rect_json(c.model.rect)},
              {"k_box", lat.k_box},
              {"k_center", lat.k_center},
              {"last_term_size", lat.last_term_size},
              {"count", lat.points.size()},
              {"points", pts}});
    fmt::print(log, "lattice: h = {}: {} points\n", hs[i], lat.points.size());
  }
  return kExitOk;
}

int cmd_oracle(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto P = c.model.operator_symbol(c.epsilon);
  const auto hs = c.hs();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const int M = c.M > 0 ? c.M : auto_window_size(P, hs[i], c.model.floquet, c.model.rect, c.epsilon);
    const auto spectrum = oracle_spectrum(P, make_window(M, hs[i], c.model.floquet), c.model.rect, c.epsilon);
    fmt::print(log, "torusquant: h = {}, M = {}, dimension {}: assembly {:.2f} s, solve {:.2f} s\n", hs[i], M,
               spectrum.window.dimension(), spectrum.assembly_seconds, spectrum.solve_seconds);
    CsvTable table({"re", "im"});
    for (cplx z : spectrum.eigenvalues) table.add_row({num(z.real()), num(z.imag())});
    out.csv(per_h("spectrum", ".csv", i, hs.size()), table);
    auto trust = window_json(spectrum.window, spectrum.trust);
    trust["in_rectangle"] = rectangle_filter(spectrum.eigenvalues, c.model.rect, c.epsilon).size();
    out.json(per_h("trust", ".json", i, hs.size()), trust);
  }
  return kExitOk;
}

int cmd_compare(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto nf = run_normal_form(c, log);
  const auto hs = c.hs();
  std::vector<CompareRun> runs(hs.size());
  parallel_for(hs.size(), c.workers,
               [&](std::size_t i) { runs[i] = compare_at(c.model, nf, hs[i], c.epsilon, compare_options(c)); });
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& r = runs[i];
    auto doc = report_json(r.report);
    doc["h"] = r.h;
    doc["N"] = r.N;
    doc["window"] = window_json(r.window, r.trust);
    out.json(per_h("match", ".json", i, hs.size()), doc);
    CsvTable scatter({"re_pred", "im_pred", "re_oracle", "im_oracle"});
    for (const auto& p : r.report.pairs)
      scatter.add_row({num(p.z_pred.real()), num(p.z_pred.imag()), num(p.z_oracle.real()), num(p.z_oracle.imag())});
    out.csv(per_h("scatter", ".csv", i, hs.size()), scatter);
    fmt::print(log, "speccompare: h = {}: {} pairs, sup error {:.3e}, counts {}\n", r.h, r.report.pairs.size(),
               r.report.sup_error, r.report.counts_agree() ? "agree" : "differ");
  }
  return kExitOk;
}

int cmd_converge(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto s = convergence_study(c.model, c.hs(), c.N, c.epsilon, compare_options(c), nf_options(c));
  CsvTable table({"h", "N", "M", "dimension", "sup_error", "mean_error", "inner_pairs", "inner_pred", "inner_oracle",
                  "inner_unmatched", "counts_agree", "slope"});
  for (const auto& r : s.runs)
    table.add_row({num(r.h), num(r.N), num(r.window.M), num(r.window.dimension()), num(r.report.sup_error),
                   num(r.report.mean_error), num(r.report.inner_pairs), num(r.report.inner_pred),
                   num(r.report.inner_oracle), num(r.report.inner_unmatched), num(int(r.report.counts_agree())),
                   num(s.slope)});
  out.csv("converge.csv", table);
  out.json("converge.json", {{"N", s.N},
                             {"eps", s.eps},
                             {"slope", s.slope},
                             {"exact", s.exact},
                             {"counts_agree", s.counts_agree},
                             {"h", c.hs()}});
  for (const auto& r : s.runs)
    fmt::print(log, "converge: h = {:.6f}  M = {:3d}  sup error {:.3e}  counts {}/{}\n", r.h, r.window.M,
               r.report.sup_error, r.report.inner_pred, r.report.inner_oracle);
  fmt::print(log, "converge: slope {:.3f}{}, {:.1f} s\n", s.slope, s.exact ? " (exact)" : "",
             std::chrono::duration<double>(Clock::now() - t0).count());
  return kExitOk;
}

int cmd_barrier_top(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const BarrierConfig b = c.barrier ? *c.barrier : default_barrier();
  const auto comm = commensurate(b.saddle.lambdas);
  std::vector<FourierTaylorSymbol> p_tilde = b.p_tilde;
  if (p_tilde.empty()) {
    FourierTaylorSymbol p0(0, 1);
    p0.set({0, 0}, {1, 0}, b.saddle.lambdas[0]);
    p0.set({0, 0}, {0, 1}, b.saddle.lambdas[1]);
    p_tilde.push_back(p0);
  }
  double mismatch = 0.0;
  const auto avg = harmonic_average(b.saddle.p3, b.saddle.lambdas);
  for (const PhasePoint& rho : {PhasePoint{0.3, -0.2, 0.1, 0.4}, PhasePoint{-0.5, 0.7, 0.2, -0.1}})
    mismatch = std::max(mismatch, std::abs(average_by_quadrature(b.saddle.p3, b.saddle.lambdas, rho) - avg(rho)));

  const auto hs = c.hs();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto red = rescale(b.saddle, c.epsilon, hs[i]);
    for (const auto& w : red.warnings) fmt::print(log, "barriertop: warning: {}\n", w);
    const auto res = resonance_lattice(red, p_tilde, b.floquet, b.rect);
    CsvTable table({"re_E", "im_E", "k1", "k2"});
    for (const auto& r : res) table.add_row({num(r.E.real()), num(r.E.imag()), num(r.k[0]), num(r.k[1])});
    out.csv(per_h("resonances", ".csv", i, hs.size()), table);
    out.json(per_h("reduced", ".json", i, hs.size()),
             {{"eps", red.eps},
              {"h", red.h},
              {"h_tilde", red.h_tilde},
              {"lambdas", red.lambdas},
              {"E0", red.E0},
              {"commensuration", {{"omega", comm.omega}, {"n", comm.n}}},
              {"p2", polynomial_to_json(red.p2)},
              {"averaged_p3", polynomial_to_json(red.averaged_p3)},
              {"perturbation", polynomial_to_json(red.perturbation)},
              {"remainder", red.remainder},
              {"quadrature_mismatch", mismatch},
              {"warnings", red.warnings}});
    fmt::print(log, "barriertop: h = {}, h_tilde = {}: {} resonances, quadrature mismatch {:.2e}\n", hs[i],
               red.h_tilde, res.size(), mismatch);
  }
  return kExitOk;
}

int cmd_selftest(const ScenarioConfig& c, ArtifactWriter& out, std::ostream& log) {
  const auto report = run_selftest(c.seed, c.workers);
  CsvTable table({"module", "check", "value", "threshold", "pass", "error"});
  for (const auto& k : report.checks) {
    table.add_row({k.module, k.name, num(k.value), num(k.threshold), num(int(k.pass)), k.error});
    fmt::print(log, "[{}] {:<12} {:<52} {:.3e} (<= {:.0e}){}\n", k.pass ? "PASS" : "FAIL", k.module, k.name, k.value,
               k.threshold, k.error.empty() ? "" : "  " + k.error);
  }
  out.csv("selftest.csv", table);
  return report.pass() ? kExitOk : kExitNumerical;
}

using Command = std::function<int(const ScenarioConfig&, ArtifactWriter&, std::ostream&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m{
      {"eiconal", cmd_eiconal}, {"bnf", cmd_bnf},         {"predict", cmd_predict},
      {"oracle", cmd_oracle},   {"compare", cmd_compare}, {"converge", cmd_converge},
      {"barrier-top", cmd_barrier_top}, {"selftest", cmd_selftest}};
  return m;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"eiconal", "bnf",      "predict",     "oracle",
                                              "compare", "converge", "barrier-top", "selftest"};
  return names;
}

int run(const std::string& subcommand, const ScenarioConfig& config, std::ostream& log) {
  const auto it = commands().find(subcommand);
  if (it == commands().end()) {
    fmt::print(log, "error: unknown subcommand '{}'\n", subcommand);
    return kExitValidation;
  }
  try {
    config.validate();
    ArtifactWriter out(config.output_dir, make_meta(config, subcommand));
    const int code = it->second(config, out, log);
    for (const auto& p : out.written()) fmt::print(log, "wrote {}\n", p.string());
    return code;
  } catch (const ValidationError& e) {
    fmt::print(log, "{}: validation error: {}\n", subcommand, e.what());
    return kExitValidation;
  } catch (const NumericalError& e) {
    fmt::print(log, "{}: numerical failure: {}\n", subcommand, e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(log, "{}: output error: {}\n", subcommand, e.what());
    return kExitValidation;
  }
}

}  // namespace quasispec::cli
