#include "quasispec/models.hpp"

#include <fmt/format.h>

namespace quasispec {

FourierTaylorSymbol Model::principal(double eps) const {
  auto s = p + (I * eps) * q;
  if (r) s += (eps * eps) * *r;
  return s;
}

HSeries Model::operator_symbol(double eps) const { return HSeries{principal(eps)}; }

Model benchmark1() {
  Model m;
  m.name = "benchmark1";
  m.p = FourierTaylorSymbol(0, 2);
  m.p.set({0, 0}, {1, 0}, 1.0);
  m.p.set({0, 0}, {2, 0}, 0.3);

  m.q = FourierTaylorSymbol(1, 2);
  m.q.set({0, 0}, {0, 1}, 1.0);
  m.q.set({0, 0}, {1, 1}, 0.15);
  // 0.2 cos(x₁)(1 + ξ₂)
  for (int s : {-1, 1}) {
    m.q.set({s, 0}, {0, 0}, 0.1);
    m.q.set({s, 0}, {0, 1}, 0.1);
  }
  // 0.1 sin(x₁ + x₂) = (0.1/2i)(e^{i(x₁+x₂)} − e^{−i(x₁+x₂)})
  m.q.set({1, 1}, {0, 0}, cplx(0.0, -0.05));
  m.q.set({-1, -1}, {0, 0}, cplx(0.0, 0.05));
  m.rect = SpectralRectangle{0.15, 0.0, 0.15, 0.0};
  return m;
}

Model linear_model() {
  Model m;
  m.name = "linear";
  m.p = FourierTaylorSymbol::term({0, 0}, {1, 0}, 1.0);
  m.q = FourierTaylorSymbol::term({0, 0}, {0, 1}, 1.0);
  m.rect = SpectralRectangle{0.15, 0.0, 0.15, 0.0};
  return m;
}

Model builtin_model(const std::string& name) {
  if (name == "benchmark1") return benchmark1();
  if (name == "linear") return linear_model();
  throw ValidationError(fmt::format("unknown model '{}' (known: benchmark1, linear)", name));
}

}  // namespace quasispec
