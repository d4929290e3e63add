#include "quasispec/symbol_json.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

namespace quasispec {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: expected an object", what));
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(fmt::format("{}: missing field '{}'", what, key));
  return *it;
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(fmt::format("{}: expected an integer", what));
  return j.get<int>();
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(fmt::format("{}: expected a number", what));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(fmt::format("{}: value is not finite", what));
  return v;
}

template <std::size_t N>
std::array<int, N> int_array(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) throw ValidationError(fmt::format("{}: expected {} integers", what, N));
  std::array<int, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_int(j[i], what);
  return out;
}

cplx complex_of(const json& j, const char* what) {
  const double re = j.contains("re") ? as_double(j["re"], what) : 0.0;
  const double im = j.contains("im") ? as_double(j["im"], what) : 0.0;
  return {re, im};
}

json symbol_list(const std::vector<FourierTaylorSymbol>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(symbol_to_json(s));
  return a;
}

std::vector<FourierTaylorSymbol> symbols_of(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(fmt::format("{}: expected an array of symbols", what));
  std::vector<FourierTaylorSymbol> out;
  for (const auto& s : j) out.push_back(symbol_from_json(s));
  return out;
}

std::vector<double> doubles_of(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(fmt::format("{}: expected an array of numbers", what));
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_double(v, what));
  return out;
}

}  // namespace

json symbol_to_json(const FourierTaylorSymbol& s) {
  json coeffs = json::array();
  s.for_each([&](IVec2 m, IVec2 a, cplx c) {
    coeffs.push_back({{"m", {m[0], m[1]}}, {"alpha", {a[0], a[1]}}, {"re", c.real()}, {"im", c.imag()}});
  });
  return {{"K", s.K()}, {"D", s.D()}, {"coeffs", std::move(coeffs)}};
}

FourierTaylorSymbol symbol_from_json(const json& j) {
  const int K = as_int(field(j, "K", "symbol"), "symbol.K");
  const int D = as_int(field(j, "D", "symbol"), "symbol.D");
  if (K < 0 || D < 0) throw ValidationError("symbol: K and D must be nonnegative");
  const auto& coeffs = field(j, "coeffs", "symbol");
  if (!coeffs.is_array()) throw ValidationError("symbol.coeffs: expected an array");
  FourierTaylorSymbol s(K, D);
  std::set<std::array<int, 4>> seen;
  for (const auto& c : coeffs) {
    const auto m = int_array<2>(field(c, "m", "symbol.coeffs"), "symbol.coeffs.m");
    const auto a = int_array<2>(field(c, "alpha", "symbol.coeffs"), "symbol.coeffs.alpha");
    if (!s.contains(m, a))
      throw ValidationError(
          fmt::format("symbol: coefficient m = ({}, {}), alpha = ({}, {}) outside K = {}, D = {}", m[0], m[1], a[0],
                      a[1], K, D));
    if (!seen.insert({m[0], m[1], a[0], a[1]}).second)
      throw ValidationError(fmt::format("symbol: duplicate coefficient m = ({}, {}), alpha = ({}, {})", m[0], m[1],
                                        a[0], a[1]));
    s.set(m, a, complex_of(c, "symbol.coeffs"));
  }
  return s;
}

json polynomial_to_json(const PhasePolynomial& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"e", e}, {"re", c.real()}, {"im", c.imag()}});
  return {{"terms", std::move(terms)}};
}

PhasePolynomial polynomial_from_json(const json& j) {
  const auto& terms = field(j, "terms", "polynomial");
  if (!terms.is_array()) throw ValidationError("polynomial.terms: expected an array");
  PhasePolynomial p;
  for (const auto& t : terms) {
    const auto e = int_array<4>(field(t, "e", "polynomial.terms"), "polynomial.terms.e");
    for (int v : e)
      if (v < 0) throw ValidationError("polynomial: exponents must be nonnegative");
    p.add(e, complex_of(t, "polynomial.terms"));
  }
  return p;
}

json normal_form_to_json(const NormalFormResult& nf) {
  return {{"schema", kSchemaVersion},
          {"epsilon", nf.epsilon},
          {"order", static_cast<int>(nf.p_tilde.size()) - 1},
          {"p_tilde", symbol_list(nf.p_tilde)},
          {"generators", symbol_list(nf.generators)},
          {"classical_generators", symbol_list(nf.classical_generators)},
          {"growth_log", nf.growth_log},
          {"classical_growth", nf.classical_growth},
          {"x_defect", nf.x_defect},
          {"truncation", {{"events", nf.truncation.events}, {"dropped_bound", nf.truncation.dropped_bound}}},
          {"warnings", nf.warnings}};
}

NormalFormResult normal_form_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != kSchemaVersion)
    throw ValidationError("normal form: expected a document with \"schema\": \"v1\"");
  NormalFormResult nf;
  nf.epsilon = as_double(field(j, "epsilon", "normal form"), "normal form.epsilon");
  nf.p_tilde = symbols_of(field(j, "p_tilde", "normal form"), "normal form.p_tilde");
  if (nf.p_tilde.empty()) throw ValidationError("normal form: p_tilde is empty");
  for (const auto& p : nf.p_tilde)
    if (!p.is_x_independent()) throw ValidationError("normal form: p_tilde must be x-independent");
  if (j.contains("generators")) nf.generators = symbols_of(j["generators"], "normal form.generators");
  if (j.contains("classical_generators"))
    nf.classical_generators = symbols_of(j["classical_generators"], "normal form.classical_generators");
  if (j.contains("growth_log")) nf.growth_log = doubles_of(j["growth_log"], "normal form.growth_log");
  if (j.contains("classical_growth")) nf.classical_growth = as_double(j["classical_growth"], "normal form");
  if (j.contains("x_defect")) nf.x_defect = doubles_of(j["x_defect"], "normal form.x_defect");
  if (j.contains("truncation")) {
    nf.truncation.events = j["truncation"].value("events", std::size_t{0});
    nf.truncation.dropped_bound = j["truncation"].value("dropped_bound", 0.0);
  }
  if (j.contains("warnings")) nf.warnings = j["warnings"].get<std::vector<std::string>>();
  return nf;
}

}  // namespace quasispec
