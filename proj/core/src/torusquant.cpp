#include "quasispec/torusquant.hpp"

#include <chrono>
#include <cmath>
#include <complex>

#include <fmt/format.h>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace quasispec {

QuantizationWindow make_window(int M, double h, const FloquetData& floquet) {
  if (M < 1) throw ValidationError("quantization window: M must be >= 1");
  const Vec2 t = floquet_shift(floquet, h);
  QuantizationWindow w;
  w.M = M;
  w.h = h;
  w.theta = {t[0] - std::floor(t[0]), t[1] - std::floor(t[1])};
  return w;
}

Eigen::MatrixXcd weyl_matrix(const HSeries& P, const QuantizationWindow& w, int max_dimension) {
  if (w.dimension() > max_dimension)
    throw ValidationError(
        fmt::format("weyl_matrix: dimension {} exceeds the cap {}", w.dimension(), max_dimension));
  if (P.max_K() > 2 * w.M)
    throw ValidationError(fmt::format("weyl_matrix: symbol x-degree {} exceeds 2M = {}", P.max_K(), 2 * w.M));
  const int dim = w.dimension();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
  const int K = P.max_K();
  for (int col = 0; col < dim; ++col) {
    const IVec2 k = w.mode(col);
    for (int m1 = -K; m1 <= K; ++m1)
      for (int m2 = -K; m2 <= K; ++m2) {
        const IVec2 l{k[0] + m1, k[1] + m2};
        if (max_abs(l) > w.M) continue;
        const CVec2 xi{w.h * (k[0] + 0.5 * m1 + w.theta[0]), w.h * (k[1] + 0.5 * m2 + w.theta[1])};
        cplx v = 0.0;
        double hn = 1.0;
        for (int n = 0; n <= P.order(); ++n, hn *= w.h)
          if (P[n].K() >= max_abs({m1, m2}) && !P[n].mode_is_zero({m1, m2})) v += hn * P[n].mode_value({m1, m2}, xi);
        if (v != cplx(0.0)) A(w.index(l), col) = v;
      }
  }
  return A;
}

std::vector<cplx> eigs(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw ValidationError("eigs: matrix must be square");
  if (!A.allFinite()) throw ValidationError("eigs: matrix has non-finite entries");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (n == 0) return {};
  Eigen::MatrixXcd work = A;  // zgeev overwrites its input
  std::vector<cplx> w(static_cast<std::size_t>(n));
  cplx dummy;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), &dummy, 1, &dummy,
                                        1);
  if (info < 0) throw ValidationError(fmt::format("eigs: zgeev rejected argument {}", -info));
  if (info > 0) throw NumericalError(fmt::format("eigs: QR algorithm failed to converge (zgeev info = {})", info));
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return w;
}

TrustReport trusted_window(const HSeries& P, const QuantizationWindow& w, const SpectralRectangle& rect, double eps) {
  rect.validate();
  TrustReport r;
  r.band_width = std::max(1, static_cast<int>(std::ceil(0.25 * w.M)));
  const int inner = w.M - r.band_width;
  double worst = std::numeric_limits<double>::infinity();
  for (int k1 = -w.M; k1 <= w.M; ++k1)
    for (int k2 = -w.M; k2 <= w.M; ++k2) {
      if (max_abs({k1, k2}) <= inner) continue;
      const CVec2 xi{w.h * (k1 + w.theta[0]), w.h * (k2 + w.theta[1])};
      const cplx d = P[0].mode_value({0, 0}, xi);
      worst = std::min(worst, rect.normalized_distance(d, eps) / 2.0 - 1.0);
    }
  r.margin = worst;
  r.pass = worst > 0.0;
  return r;
}

int auto_window_size(const HSeries& P, double h, const FloquetData& floquet, const SpectralRectangle& rect,
                     double eps, int max_dimension) {
  for (int M = std::max(1, (P.max_K() + 1) / 2);; ++M) {
    const auto w = make_window(M, h, floquet);
    if (w.dimension() > max_dimension) break;
    if (trusted_window(P, w, rect, eps).pass) return M;
  }
  throw NumericalError(fmt::format(
      "auto_window_size: no trusted window with dimension <= {} at h = {} (rectangle too large for the cap)",
      max_dimension, h));
}

OracleSpectrum oracle_spectrum(const HSeries& P, const QuantizationWindow& w, const SpectralRectangle& rect,
                               double eps, int max_dimension) {
  using clock = std::chrono::steady_clock;
  OracleSpectrum out;
  out.window = w;
  out.trusted_rectangle = rect;
  out.trust = trusted_window(P, w, rect, eps);
  if (!out.trust.pass)
    throw NumericalError(fmt::format("oracle: untrusted window (M = {}, h = {}, margin {:.3e})", w.M, w.h,
                                     out.trust.margin));
  const auto t0 = clock::now();
  const auto A = weyl_matrix(P, w, max_dimension);
  const auto t1 = clock::now();
  out.eigenvalues = eigs(A);
  const auto t2 = clock::now();
  out.assembly_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

}  // namespace quasispec
