#include "quasispec/speccompare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "quasispec/hungarian.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

namespace {

bool less_c(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

double median_nn_spacing(const std::vector<cplx>& z) {
  if (z.size() < 2) return 0.0;
  std::vector<double> nn(z.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j)
      if (i != j) nn[i] = std::min(nn[i], std::abs(z[i] - z[j]));
  std::sort(nn.begin(), nn.end());
  return nn[nn.size() / 2];
}

// Matching of two canonically ordered point sets; returns partner index into
// b for each element of a (−1 if unmatched). Orientation is chosen from the
// sets themselves so that match(a, b) and match(b, a) are mirror images.
std::vector<int> match_sets(const std::vector<cplx>& a, const std::vector<cplx>& b, double cap) {
  if (a.empty() || b.empty()) return std::vector<int>(a.size(), -1);
  bool a_rows = a.size() < b.size();
  if (a.size() == b.size()) a_rows = !std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end(), less_c);
  const auto& R = a_rows ? a : b;
  const auto& C = a_rows ? b : a;
  const int n = static_cast<int>(R.size());
  const int m = static_cast<int>(C.size());
  // Columns: the real partners, then one refusal column per row.
  const double refuse = 10.0 * (n + 1) * std::max(cap, 1e-300);
  const int cols = m + n;
  std::vector<double> cost(static_cast<std::size_t>(n) * cols, refuse);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double d = std::abs(R[i] - C[j]);
      cost[static_cast<std::size_t>(i) * cols + j] = d <= cap ? d : 4.0 * refuse;
    }
  const auto assign = hungarian(cost, n, cols);
  std::vector<int> partner(a.size(), -1);
  for (int i = 0; i < n; ++i) {
    const int j = assign[i];
    if (j < 0 || j >= m || std::abs(R[i] - C[j]) > cap) continue;
    if (a_rows)
      partner[i] = j;
    else
      partner[j] = i;
  }
  return partner;
}

}  // namespace

MatchReport match_spectra(const std::vector<LatticePoint>& pred, const std::vector<cplx>& oracle,
                          const SpectralRectangle& rect, double eps, double shrink) {
  rect.validate();
  if (!(shrink > 0.0 && shrink <= 1.0)) throw ValidationError("match_spectra: shrink must lie in (0, 1]");
  std::vector<LatticePoint> P;
  for (const auto& p : pred)
    if (rect.contains(p.z, eps)) P.push_back(p);
  std::vector<cplx> O = rectangle_filter(oracle, rect, eps);
  std::sort(P.begin(), P.end(), [](const LatticePoint& x, const LatticePoint& y) { return less_c(x.z, y.z); });
  std::sort(O.begin(), O.end(), less_c);
  std::vector<cplx> pz(P.size());
  std::transform(P.begin(), P.end(), pz.begin(), [](const LatticePoint& p) { return p.z; });

  MatchReport r;
  const double spacing = std::max(median_nn_spacing(pz), median_nn_spacing(O));
  r.cost_cap = spacing > 0.0 ? 10.0 * spacing : std::numeric_limits<double>::infinity();
  if (pz.size() > 2000 || O.size() > 2000)
    throw ValidationError("match_spectra: more than 2000 points in the rectangle");
  const auto partner = match_sets(pz, O, r.cost_cap);

  const auto inner = rect.scaled(shrink);
  std::vector<char> used(O.size(), 0);
  std::vector<double> inner_errors;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const bool in = inner.contains(P[i].z, eps);
    r.inner_pred += in;
    if (partner[i] < 0) {
      r.unmatched_pred.push_back(P[i]);
      r.inner_unmatched += in;
      continue;
    }
    const cplx zo = O[static_cast<std::size_t>(partner[i])];
    used[static_cast<std::size_t>(partner[i])] = 1;
    const double err = std::abs(P[i].z - zo);
    r.pairs.push_back({P[i].k, P[i].z, zo, err});
    if (in || inner.contains(zo, eps)) inner_errors.push_back(err);
  }
  for (std::size_t j = 0; j < O.size(); ++j) {
    const bool in = inner.contains(O[j], eps);
    r.inner_oracle += in;
    if (!used[j]) {
      r.unmatched_oracle.push_back(O[j]);
      r.inner_unmatched += in;
    }
  }
  std::sort(inner_errors.begin(), inner_errors.end());
  r.inner_pairs = static_cast<int>(inner_errors.size());
  if (!inner_errors.empty()) {
    r.sup_error = inner_errors.back();
    r.mean_error = std::accumulate(inner_errors.begin(), inner_errors.end(), 0.0) / inner_errors.size();
  }
  return r;
}

CompareRun compare_at(const Model& model, const NormalFormResult& nf, double h, double eps,
                      const CompareOptions& opts) {
  CompareRun run;
  run.h = h;
  run.N = static_cast<int>(nf.p_tilde.size()) - 1;
  const auto P = model.operator_symbol(eps);
  const int M = opts.M > 0 ? opts.M : auto_window_size(P, h, model.floquet, model.rect, eps, opts.max_dimension);
  run.window = make_window(M, h, model.floquet);
  const auto spectrum = oracle_spectrum(P, run.window, model.rect, eps, opts.max_dimension);
  run.trust = spectrum.trust;
  run.solve_seconds = spectrum.solve_seconds;
  run.lattice = quasi_eigenvalues(nf.p_tilde, h, model.floquet, model.rect, eps);
  run.report = match_spectra(run.lattice.points, spectrum.eigenvalues, model.rect, eps, opts.shrink);
  return run;
}

ConvergenceStudy convergence_study(const Model& model, const std::vector<double>& h_list, int N, double eps,
                                   const CompareOptions& opts, const NormalFormOptions& nf_opts) {
  if (h_list.size() < 4) throw ValidationError("convergence_study: needs at least four h values");
  for (double h : h_list)
    if (!(h > 0.0)) throw ValidationError("convergence_study: h values must be positive");
  ConvergenceStudy s;
  s.N = N;
  s.eps = eps;
  const auto nf = normal_form(model.operator_symbol(eps), N, eps, nf_opts);
  s.runs.resize(h_list.size());
  parallel_for(h_list.size(), opts.workers, [&](std::size_t i) { s.runs[i] = compare_at(model, nf, h_list[i], eps, opts); });

  std::vector<double> hs, errs;
  s.exact = true;
  for (const auto& r : s.runs) {
    s.counts_agree = s.counts_agree && r.report.counts_agree();
    s.exact = s.exact && r.report.sup_error <= 1e-12;
    hs.push_back(r.h);
    errs.push_back(r.report.sup_error);
  }
  if (!s.exact) {
    for (double& e : errs) e = std::max(e, std::numeric_limits<double>::min());
    s.slope = loglog_slope(hs, errs);
  }
  return s;
}

}  // namespace quasispec
