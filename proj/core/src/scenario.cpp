#include "quasispec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "quasispec/geomflow.hpp"
#include "quasispec/symbol_json.hpp"

namespace quasispec {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("config: cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("config: '{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

FourierTaylorSymbol symbol_field(const json& j, const std::filesystem::path& base_dir, const std::string& what) {
  if (j.is_string()) {
    const auto path = base_dir / j.get<std::string>();
    if (!std::filesystem::exists(path))
      throw ValidationError(fmt::format("config: {} refers to missing file '{}'", what, path.string()));
    return symbol_from_json(read_json_file(path));
  }
  try {
    return symbol_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("config: {}: {}", what, e.what()));
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(fmt::format("config: {} must be a number", what));
  return j.get<double>();
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ValidationError(fmt::format("config: {} must be an integer", what));
  return j.get<int>();
}

Vec2 vec2(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(fmt::format("config: {} must be a pair", what));
  return {number(j[0], what), number(j[1], what)};
}

IVec2 ivec2(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(fmt::format("config: {} must be a pair", what));
  return {integer(j[0], what), integer(j[1], what)};
}

FloquetData floquet_of(const json& j) {
  FloquetData f;
  if (j.contains("S")) f.S = vec2(j["S"], "floquet.S");
  if (j.contains("alpha0")) f.alpha0 = ivec2(j["alpha0"], "floquet.alpha0");
  return f;
}

SpectralRectangle rect_of(const json& j, SpectralRectangle r) {
  if (j.contains("re_center")) r.re_center = number(j["re_center"], "rectangle.re_center");
  if (j.contains("re_half_width")) r.re_half_width = number(j["re_half_width"], "rectangle.re_half_width");
  if (j.contains("im_center_over_eps"))
    r.im_center_over_eps = number(j["im_center_over_eps"], "rectangle.im_center_over_eps");
  if (j.contains("im_half_width_over_eps"))
    r.im_half_width_over_eps = number(j["im_half_width_over_eps"], "rectangle.im_half_width_over_eps");
  return r;
}

json floquet_json(const FloquetData& f) { return {{"S", f.S}, {"alpha0", f.alpha0}}; }

json rect_json(const SpectralRectangle& r) {
  return {{"re_center", r.re_center},
          {"re_half_width", r.re_half_width},
          {"im_center_over_eps", r.im_center_over_eps},
          {"im_half_width_over_eps", r.im_half_width_over_eps}};
}

Model model_of(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) return builtin_model(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("config: model must be a name or an object");
  Model m;
  m.name = j.value("name", "custom");
  if (!j.contains("p") || !j.contains("q")) throw ValidationError("config: model needs symbols p and q");
  m.p = symbol_field(j["p"], base_dir, "model.p");
  m.q = symbol_field(j["q"], base_dir, "model.q");
  if (j.contains("r") && !j["r"].is_null()) m.r = symbol_field(j["r"], base_dir, "model.r");
  return m;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError("config: " + msg);
}

}  // namespace

std::vector<Vec2> EtaGrid::etas() const {
  std::vector<Vec2> out;
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      const double t1 = points == 1 ? 0.0 : -radius + 2.0 * radius * i / (points - 1);
      const double t2 = points == 1 ? 0.0 : -radius + 2.0 * radius * j / (points - 1);
      out.push_back({t1, t2});
    }
  return out;
}

BarrierConfig default_barrier() {
  BarrierConfig b;
  const auto x1 = PhasePolynomial::variable(0), x2 = PhasePolynomial::variable(1);
  b.saddle = ResonantSaddle{{1.0, 2.0}, IVec2{2, -1}, x1 * x1 * x2, 0.0};
  return b;
}

void ScenarioConfig::validate() const {
  require(h.has_value() != !h_list.empty(), "exactly one of h and h_list must be given");
  for (double v : hs()) require(v > 0.0 && std::isfinite(v), "h values must be positive");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  require(epsilon_tilde >= 0.0 && std::isfinite(epsilon_tilde), "epsilon_tilde must be nonnegative");
  require(N >= 0, "N must be nonnegative");
  require(M >= 0, "window.M must be nonnegative");
  require(shrink > 0.0 && shrink <= 1.0, "shrink must lie in (0, 1]");
  require(caps.max_modes >= 1 && caps.max_degree >= 1, "caps.K and caps.D must be positive");
  require(eiconal_tolerance > 0.0, "tolerances.eiconal must be positive");
  require(divisor_floor > 0.0, "tolerances.divisor_floor must be positive");
  require(eta.points >= 1 && eta.radius >= 0.0, "eta_grid needs points >= 1 and radius >= 0");
  for (double e : growth_eps) require(e > 0.0, "growth_eps values must be positive");
  require(workers >= 1, "workers must be at least 1");
  try {
    model.rect.validate();
    FlowModel(model.p, model.q, epsilon);
    if (barrier) barrier->saddle.validate();
    if (barrier) barrier->rect.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("config: {}", e.what()));
  }
}

std::vector<double> ScenarioConfig::hs() const { return h ? std::vector<double>{*h} : h_list; }

ScenarioConfig default_config(const std::string& model_name) {
  ScenarioConfig c;
  c.model = builtin_model(model_name);
  c.h_list = {1.0 / 16, 1.0 / 24, 1.0 / 32, 1.0 / 48};
  return c;
}

ScenarioConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  if (j.value("schema", std::string(kSchemaVersion)) != kSchemaVersion)
    throw ValidationError(fmt::format("config: unsupported schema '{}'", j["schema"].dump()));
  static const std::set<std::string> known{"schema",    "model",      "epsilon",   "epsilon_tilde", "h",
                                           "h_list",    "N",          "floquet",   "rectangle",     "window",
                                           "shrink",    "caps",       "tolerances", "seed",         "eta_grid",
                                           "growth_eps", "barrier",   "output_dir", "workers"};
  for (const auto& [key, _] : j.items())
    require(known.count(key) > 0, fmt::format("unknown field '{}'", key));

  ScenarioConfig c;
  c.model = model_of(j.value("model", json("benchmark1")), base_dir);
  if (j.contains("floquet")) c.model.floquet = floquet_of(j["floquet"]);
  if (j.contains("rectangle")) c.model.rect = rect_of(j["rectangle"], c.model.rect);
  if (j.contains("epsilon")) c.epsilon = number(j["epsilon"], "epsilon");
  if (j.contains("epsilon_tilde")) c.epsilon_tilde = number(j["epsilon_tilde"], "epsilon_tilde");
  if (j.contains("h")) c.h = number(j["h"], "h");
  if (j.contains("h_list")) {
    require(j["h_list"].is_array(), "h_list must be an array");
    for (const auto& v : j["h_list"]) c.h_list.push_back(number(v, "h_list"));
    require(!c.h_list.empty(), "h_list is empty");
  }
  if (j.contains("N")) c.N = integer(j["N"], "N");
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.is_string())
      require(w.get<std::string>() == "auto", "window must be \"auto\" or {\"M\": int}");
    else
      c.M = integer(w.value("M", json(0)), "window.M");
  }
  if (j.contains("shrink")) c.shrink = number(j["shrink"], "shrink");
  if (j.contains("caps")) {
    c.caps.max_modes = integer(j["caps"].value("K", json(c.caps.max_modes)), "caps.K");
    c.caps.max_degree = integer(j["caps"].value("D", json(c.caps.max_degree)), "caps.D");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("eiconal")) c.eiconal_tolerance = number(t["eiconal"], "tolerances.eiconal");
    if (t.contains("divisor_floor")) c.divisor_floor = number(t["divisor_floor"], "tolerances.divisor_floor");
  }
  if (j.contains("seed")) {
    require(j["seed"].is_number_unsigned(), "seed must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("eta_grid")) {
    c.eta.points = integer(j["eta_grid"].value("points", json(c.eta.points)), "eta_grid.points");
    c.eta.radius = number(j["eta_grid"].value("radius", json(c.eta.radius)), "eta_grid.radius");
  }
  if (j.contains("growth_eps")) {
    require(j["growth_eps"].is_array(), "growth_eps must be an array");
    c.growth_eps.clear();
    for (const auto& v : j["growth_eps"]) c.growth_eps.push_back(number(v, "growth_eps"));
  }
  if (j.contains("barrier")) {
    const auto& b = j["barrier"];
    BarrierConfig bc = default_barrier();
    if (b.contains("lambdas")) bc.saddle.lambdas = vec2(b["lambdas"], "barrier.lambdas");
    if (b.contains("k_res"))
      bc.saddle.k_res = b["k_res"].is_null() ? std::nullopt : std::optional<IVec2>(ivec2(b["k_res"], "barrier.k_res"));
    if (b.contains("E0")) bc.saddle.E0 = number(b["E0"], "barrier.E0");
    if (b.contains("p3")) bc.saddle.p3 = polynomial_from_json(b["p3"]);
    if (b.contains("floquet")) bc.floquet = floquet_of(b["floquet"]);
    if (b.contains("rectangle")) bc.rect = rect_of(b["rectangle"], bc.rect);
    if (b.contains("p_tilde")) {
      require(b["p_tilde"].is_array(), "barrier.p_tilde must be an array of symbols");
      for (const auto& s : b["p_tilde"]) bc.p_tilde.push_back(symbol_field(s, base_dir, "barrier.p_tilde"));
    }
    c.barrier = bc;
  }
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("workers")) c.workers = integer(j["workers"], "workers");
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError(fmt::format("config: '{}' does not exist", path.string()));
  return config_from_json(read_json_file(path), path.parent_path());
}

json config_to_json(const ScenarioConfig& c) {
  json model = {{"name", c.model.name}, {"p", symbol_to_json(c.model.p)}, {"q", symbol_to_json(c.model.q)}};
  if (c.model.r) model["r"] = symbol_to_json(*c.model.r);
  json j = {{"schema", kSchemaVersion},
            {"model", std::move(model)},
            {"epsilon", c.epsilon},
            {"epsilon_tilde", c.epsilon_tilde},
            {"N", c.N},
            {"floquet", floquet_json(c.model.floquet)},
            {"rectangle", rect_json(c.model.rect)},
            {"window", {{"M", c.M}}},
            {"shrink", c.shrink},
            {"caps", {{"K", c.caps.max_modes}, {"D", c.caps.max_degree}}},
            {"tolerances", {{"eiconal", c.eiconal_tolerance}, {"divisor_floor", c.divisor_floor}}},
            {"seed", c.seed},
            {"eta_grid", {{"points", c.eta.points}, {"radius", c.eta.radius}}},
            {"growth_eps", c.growth_eps}};
  if (c.h)
    j["h"] = *c.h;
  else
    j["h_list"] = c.h_list;
  if (c.barrier) {
    const auto& b = *c.barrier;
    json bj = {{"lambdas", b.saddle.lambdas},
               {"E0", b.saddle.E0},
               {"p3", polynomial_to_json(b.saddle.p3)},
               {"floquet", floquet_json(b.floquet)},
               {"rectangle", rect_json(b.rect)}};
    bj["k_res"] = b.saddle.k_res ? json(*b.saddle.k_res) : json(nullptr);
    if (!b.p_tilde.empty()) {
      bj["p_tilde"] = json::array();
      for (const auto& s : b.p_tilde) bj["p_tilde"].push_back(symbol_to_json(s));
    }
    j["barrier"] = std::move(bj);
  }
  return j;
}

std::string config_hash(const ScenarioConfig& c) {
  const std::string text = config_to_json(c).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("config_hash: SHA-256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace quasispec
