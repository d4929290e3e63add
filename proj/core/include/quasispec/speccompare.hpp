#pragma once

// Matching of predicted quasi-eigenvalues against oracle spectra, and
// convergence studies of the matched error in h.

#include <vector>

#include "quasispec/birkhoff.hpp"
#include "quasispec/lattice.hpp"
#include "quasispec/models.hpp"
#include "quasispec/torusquant.hpp"

namespace quasispec {

struct MatchedPair {
  IVec2 k;
  cplx z_pred;
  cplx z_oracle;
  double error;
};

struct MatchReport {
  std::vector<MatchedPair> pairs;          ///< sorted by (Re z_pred, Im z_pred)
  std::vector<LatticePoint> unmatched_pred;
  std::vector<cplx> unmatched_oracle;
  /// Statistics over pairs with at least one end inside the shrunk rectangle.
  double sup_error = 0.0;
  double mean_error = 0.0;
  int inner_pairs = 0;
  int inner_pred = 0;    ///< predicted points inside the shrunk rectangle
  int inner_oracle = 0;  ///< oracle points inside the shrunk rectangle
  int inner_unmatched = 0;
  double cost_cap = 0.0;  ///< pairs farther apart than this are refused
  bool counts_agree() const { return inner_pred == inner_oracle && inner_unmatched == 0; }
};

/// Optimal one-to-one partial matching (maximum cardinality among pairs within
/// the cost cap, then minimum total distance). Both lists are first restricted
/// to `rect`. The result depends only on the two point sets, so swapping the
/// roles of prediction and oracle gives the transposed report.
MatchReport match_spectra(const std::vector<LatticePoint>& pred, const std::vector<cplx>& oracle,
                          const SpectralRectangle& rect, double eps, double shrink = 0.9);

struct CompareOptions {
  double shrink = 0.9;
  int M = 0;  ///< 0 selects auto_window_size
  int max_dimension = kDefaultMaxDimension;
  int workers = 1;
};

struct CompareRun {
  double h = 0.0;
  int N = 0;
  QuantizationWindow window;
  TrustReport trust;
  LatticeResult lattice;
  MatchReport report;
  double solve_seconds = 0.0;
};

/// Oracle spectrum of the model at (h, ε) matched against the lattice of `nf`.
CompareRun compare_at(const Model& model, const NormalFormResult& nf, double h, double eps,
                      const CompareOptions& opts = {});

struct ConvergenceStudy {
  int N = 0;
  double eps = 0.0;
  std::vector<CompareRun> runs;  ///< in h_list order
  double slope = 0.0;            ///< least-squares slope of log sup_error vs log h
  bool exact = false;            ///< every sup_error ≤ 1e-12: slope not meaningful
  bool counts_agree = true;
};

/// Requires at least four h values; every window must be trusted.
ConvergenceStudy convergence_study(const Model& model, const std::vector<double>& h_list, int N, double eps,
                                   const CompareOptions& opts = {}, const NormalFormOptions& nf_opts = {});

}  // namespace quasispec
