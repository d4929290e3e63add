#include "quasispec/symbol.hpp"

#include <cmath>
#include <fmt/format.h>

namespace quasispec {

FourierTaylorSymbol::FourierTaylorSymbol(int K, int D) : K_(K), D_(D), nmono_(mono::count(D)) {
  if (K < 0 || D < 0) throw ValidationError(fmt::format("symbol bounds must be nonnegative (K={}, D={})", K, D));
  c_.assign(static_cast<std::size_t>(side()) * side() * nmono_, cplx(0.0));
}

FourierTaylorSymbol FourierTaylorSymbol::constant(cplx c) {
  FourierTaylorSymbol s(0, 0);
  s.c_[0] = c;
  return s;
}

FourierTaylorSymbol FourierTaylorSymbol::term(IVec2 m, IVec2 alpha, cplx c) {
  FourierTaylorSymbol s(max_abs(m), alpha[0] + alpha[1]);
  s.set(m, alpha, c);
  return s;
}

cplx FourierTaylorSymbol::coeff(IVec2 m, IVec2 alpha) const {
  if (!contains(m, alpha)) return 0.0;
  return c_[offset(m) + mono::index(alpha)];
}

void FourierTaylorSymbol::set(IVec2 m, IVec2 alpha, cplx c) {
  if (!contains(m, alpha))
    throw ValidationError(fmt::format("key m=({},{}) alpha=({},{}) outside bounds K={} D={}", m[0], m[1],
                                      alpha[0], alpha[1], K_, D_));
  c_[offset(m) + mono::index(alpha)] = c;
}

void FourierTaylorSymbol::add(IVec2 m, IVec2 alpha, cplx c) {
  if (!contains(m, alpha))
    throw ValidationError(fmt::format("key m=({},{}) alpha=({},{}) outside bounds K={} D={}", m[0], m[1],
                                      alpha[0], alpha[1], K_, D_));
  c_[offset(m) + mono::index(alpha)] += c;
}

std::span<const cplx> FourierTaylorSymbol::mode(IVec2 m) const {
  return std::span<const cplx>(c_).subspan(offset(m), static_cast<std::size_t>(nmono_));
}

std::span<cplx> FourierTaylorSymbol::mode(IVec2 m) {
  return std::span<cplx>(c_).subspan(offset(m), static_cast<std::size_t>(nmono_));
}

bool FourierTaylorSymbol::mode_is_zero(IVec2 m) const {
  for (cplx c : mode(m))
    if (c != cplx(0.0)) return false;
  return true;
}

bool FourierTaylorSymbol::is_zero() const {
  for (cplx c : c_)
    if (c != cplx(0.0)) return false;
  return true;
}

bool FourierTaylorSymbol::is_x_independent() const {
  bool ok = true;
  for_each([&](IVec2 m, IVec2, cplx) {
    if (m[0] != 0 || m[1] != 0) ok = false;
  });
  return ok;
}

std::size_t FourierTaylorSymbol::nnz() const {
  std::size_t n = 0;
  for (cplx c : c_)
    if (c != cplx(0.0)) ++n;
  return n;
}

FourierTaylorSymbol FourierTaylorSymbol::with_bounds(int K, int D, TruncationInfo* info) const {
  FourierTaylorSymbol out(K, D);
  double dropped = 0.0;
  for_each([&](IVec2 m, IVec2 a, cplx c) {
    if (out.contains(m, a))
      out.set(m, a, c);
    else
      dropped += std::abs(c);
  });
  if (info) info->record(dropped);
  return out;
}

FourierTaylorSymbol FourierTaylorSymbol::tightened() const {
  int K = 0;
  int D = 0;
  for_each([&](IVec2 m, IVec2 a, cplx) {
    K = std::max(K, max_abs(m));
    D = std::max(D, a[0] + a[1]);
  });
  return with_bounds(K, D);
}

void FourierTaylorSymbol::canonicalize(double threshold) {
  for (cplx& c : c_)
    if (std::abs(c) < threshold) c = 0.0;
}

double FourierTaylorSymbol::norm_l1() const {
  double s = 0.0;
  for (cplx c : c_) s += std::abs(c);
  return s;
}

double FourierTaylorSymbol::norm_max() const {
  double s = 0.0;
  for (cplx c : c_) s = std::max(s, std::abs(c));
  return s;
}

double FourierTaylorSymbol::norm_weighted(double r) const {
  double s = 0.0;
  for_each([&](IVec2, IVec2 a, cplx c) { s += std::abs(c) * std::pow(r, a[0] + a[1]); });
  return s;
}

namespace {

// Powers ξ₁^a ξ₂^b for all monomials up to degree D.
std::vector<cplx> monomial_values(const CVec2& xi, int D) {
  std::vector<cplx> v(static_cast<std::size_t>(mono::count(D)));
  for (int j = 0; j < mono::count(D); ++j) {
    const IVec2 a = mono::exponent(j);
    v[j] = std::pow(xi[0], a[0]) * std::pow(xi[1], a[1]);
  }
  return v;
}

}  // namespace

cplx FourierTaylorSymbol::mode_value(IVec2 m, const CVec2& xi) const {
  if (max_abs(m) > K_) return 0.0;
  const auto pw = monomial_values(xi, D_);
  cplx s = 0.0;
  const auto poly = mode(m);
  for (int j = 0; j < nmono_; ++j) s += poly[j] * pw[j];
  return s;
}

cplx FourierTaylorSymbol::operator()(const Vec2& x, const CVec2& xi) const {
  const auto pw = monomial_values(xi, D_);
  cplx s = 0.0;
  for (int m1 = -K_; m1 <= K_; ++m1)
    for (int m2 = -K_; m2 <= K_; ++m2) {
      const auto poly = mode({m1, m2});
      cplx p = 0.0;
      for (int j = 0; j < nmono_; ++j) p += poly[j] * pw[j];
      if (p != cplx(0.0)) s += p * std::exp(I * (m1 * x[0] + m2 * x[1]));
    }
  return s;
}

FourierTaylorSymbol& FourierTaylorSymbol::operator+=(const FourierTaylorSymbol& o) {
  if (o.K_ > K_ || o.D_ > D_) *this = with_bounds(std::max(K_, o.K_), std::max(D_, o.D_));
  o.for_each([&](IVec2 m, IVec2 a, cplx c) { c_[offset(m) + mono::index(a)] += c; });
  return *this;
}

FourierTaylorSymbol& FourierTaylorSymbol::operator-=(const FourierTaylorSymbol& o) {
  if (o.K_ > K_ || o.D_ > D_) *this = with_bounds(std::max(K_, o.K_), std::max(D_, o.D_));
  o.for_each([&](IVec2 m, IVec2 a, cplx c) { c_[offset(m) + mono::index(a)] -= c; });
  return *this;
}

FourierTaylorSymbol& FourierTaylorSymbol::operator*=(cplx s) {
  for (cplx& c : c_) c *= s;
  return *this;
}

bool operator==(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b) {
  return max_difference(a, b) == 0.0;
}

FourierTaylorSymbol operator+(FourierTaylorSymbol a, const FourierTaylorSymbol& b) { return a += b; }
FourierTaylorSymbol operator-(FourierTaylorSymbol a, const FourierTaylorSymbol& b) { return a -= b; }
FourierTaylorSymbol operator-(FourierTaylorSymbol a) { return a *= -1.0; }
FourierTaylorSymbol operator*(cplx s, FourierTaylorSymbol a) { return a *= s; }
FourierTaylorSymbol operator*(FourierTaylorSymbol a, cplx s) { return a *= s; }

double max_difference(const FourierTaylorSymbol& a, const FourierTaylorSymbol& b) {
  double d = 0.0;
  a.for_each([&](IVec2 m, IVec2 al, cplx c) { d = std::max(d, std::abs(c - b.coeff(m, al))); });
  b.for_each([&](IVec2 m, IVec2 al, cplx c) { d = std::max(d, std::abs(c - a.coeff(m, al))); });
  return d;
}

FourierTaylorSymbol d_x(const FourierTaylorSymbol& a, int j) {
  return derivative(a, {0, 0}, j == 0 ? IVec2{1, 0} : IVec2{0, 1});
}

FourierTaylorSymbol d_xi(const FourierTaylorSymbol& a, int j) {
  return derivative(a, j == 0 ? IVec2{1, 0} : IVec2{0, 1}, {0, 0});
}

FourierTaylorSymbol derivative(const FourierTaylorSymbol& a, IVec2 u, IVec2 v) {
  const int du = u[0] + u[1];
  FourierTaylorSymbol out(a.K(), std::max(0, a.D() - du));
  a.for_each([&](IVec2 m, IVec2 al, cplx c) {
    if (al[0] < u[0] || al[1] < u[1]) return;
    const double f = mono::falling(al[0], u[0]) * mono::falling(al[1], u[1]);
    const cplx x = std::pow(I * static_cast<double>(m[0]), v[0]) * std::pow(I * static_cast<double>(m[1]), v[1]);
    const cplx val = c * f * x;
    if (val != cplx(0.0)) out.add(m, {al[0] - u[0], al[1] - u[1]}, val);
  });
  return out;
}

FourierTaylorSymbol taylor_reciprocal(const FourierTaylorSymbol& f, int D, double floor) {
  if (!f.is_x_independent()) throw ValidationError("taylor_reciprocal: divisor must be x-independent");
  const cplx f0 = f.coeff({0, 0}, {0, 0});
  if (std::abs(f0) < floor)
    throw NumericalError(fmt::format("taylor_reciprocal: vanishing divisor |f(0)| = {:.3e} below floor {:.1e}",
                                     std::abs(f0), floor));
  FourierTaylorSymbol g(0, D);
  auto gp = g.mode({0, 0});
  const auto fp = f.mode({0, 0});
  const int nf = f.monomials();
  gp[0] = 1.0 / f0;
  for (int k = 1; k < mono::count(D); ++k) {
    const IVec2 a = mono::exponent(k);
    cplx s = 0.0;
    // Σ_{β ≠ 0, β ≤ α} f_β g_{α−β}
    for (int b1 = 0; b1 <= a[0]; ++b1)
      for (int b2 = 0; b2 <= a[1]; ++b2) {
        if (b1 == 0 && b2 == 0) continue;
        const int fb = mono::index(b1, b2);
        if (fb >= nf) continue;
        s += fp[fb] * gp[mono::index(a[0] - b1, a[1] - b2)];
      }
    gp[k] = -s / f0;
  }
  return g;
}

int HSeries::max_K() const {
  int k = 0;
  for (const auto& t : terms) k = std::max(k, t.K());
  return k;
}

int HSeries::max_D() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.D());
  return d;
}

double HSeries::norm_l1() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.norm_l1();
  return s;
}

void HSeries::uniformize() {
  const int K = max_K();
  const int D = max_D();
  for (auto& t : terms)
    if (t.K() != K || t.D() != D) t = t.with_bounds(K, D);
}

}  // namespace quasispec
