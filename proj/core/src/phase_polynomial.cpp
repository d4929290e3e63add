#include "quasispec/phase_polynomial.hpp"

#include <cmath>

namespace quasispec {

PhasePolynomial PhasePolynomial::constant(cplx c) { return monomial({0, 0, 0, 0}, c); }

PhasePolynomial PhasePolynomial::monomial(Exponent4 e, cplx c) {
  for (int v : e)
    if (v < 0) throw ValidationError("PhasePolynomial: negative exponent");
  PhasePolynomial p;
  p.add(e, c);
  return p;
}

PhasePolynomial PhasePolynomial::variable(int index) {
  if (index < 0 || index > 3) throw ValidationError("PhasePolynomial: variable index must be 0..3");
  Exponent4 e{0, 0, 0, 0};
  e[static_cast<std::size_t>(index)] = 1;
  return monomial(e);
}

cplx PhasePolynomial::coeff(Exponent4 e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

void PhasePolynomial::add(Exponent4 e, cplx c) {
  if (c == cplx(0.0)) return;
  auto& slot = terms_[e];
  slot += c;
  if (slot == cplx(0.0)) terms_.erase(e);
}

void PhasePolynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->second == cplx(0.0) ? terms_.erase(it) : std::next(it);
}

int PhasePolynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

bool PhasePolynomial::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_)
    if (e[0] + e[1] + e[2] + e[3] != d) return false;
  return true;
}

bool PhasePolynomial::is_real() const {
  for (const auto& [e, c] : terms_)
    if (c.imag() != 0.0) return false;
  return true;
}

cplx PhasePolynomial::operator()(const PhasePoint& p) const {
  cplx s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) m *= p[static_cast<std::size_t>(i)];
    s += c * m;
  }
  return s;
}

PhasePolynomial PhasePolynomial::derivative(int index) const {
  PhasePolynomial out;
  const auto i = static_cast<std::size_t>(index);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent4 f = e;
    --f[i];
    out.add(f, c * static_cast<double>(e[i]));
  }
  return out;
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add(e, -c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(cplx s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
PhasePolynomial operator*(cplx s, PhasePolynomial a) { return a *= s; }

PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
  PhasePolynomial out;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      out.add({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
  return out;
}

PhasePolynomial pow(const PhasePolynomial& a, int n) {
  if (n < 0) throw ValidationError("PhasePolynomial: negative power");
  PhasePolynomial out = PhasePolynomial::constant(1.0);
  for (int k = 0; k < n; ++k) out = out * a;
  return out;
}

PhasePolynomial poisson_bracket(const PhasePolynomial& a, const PhasePolynomial& b) {
  PhasePolynomial out;
  for (int j = 0; j < 2; ++j) {
    out += a.derivative(2 + j) * b.derivative(j);
    out -= a.derivative(j) * b.derivative(2 + j);
  }
  return out;
}

double max_difference(const PhasePolynomial& a, const PhasePolynomial& b) {
  double d = 0.0;
  for (const auto& [e, c] : (a - b).terms()) d = std::max(d, std::abs(c));
  return d;
}

}  // namespace quasispec
