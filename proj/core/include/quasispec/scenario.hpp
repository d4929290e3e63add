#pragma once

// Scenario configuration for batch runs: JSON in, validated, normalized and hashed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasispec/barriertop.hpp"
#include "quasispec/models.hpp"

namespace quasispec {

struct EtaGrid {
  int points = 5;        ///< points per axis
  double radius = 0.05;  ///< η ∈ [−radius, radius]²
  std::vector<Vec2> etas() const;
};

struct BarrierConfig {
  ResonantSaddle saddle;
  FloquetData floquet{{0.0, 0.0}, {2, 2}};
  SpectralRectangle rect{0.5, 0.0, 2.0, 1.0};
  /// Normal form of the reduced problem in its action chart; empty selects λ₁I₁ + λ₂I₂.
  std::vector<FourierTaylorSymbol> p_tilde;
};

BarrierConfig default_barrier();

struct ScenarioConfig {
  Model model;  ///< model.floquet / model.rect hold the effective Floquet data and rectangle
  double epsilon = 0.1;
  double epsilon_tilde = 0.0;  ///< 0 means √ε
  std::optional<double> h;
  std::vector<double> h_list;
  int N = 3;
  int M = 0;  ///< 0 selects auto_window_size
  double shrink = 0.9;
  TruncationCaps caps{8, 12, 1e-30};
  double eiconal_tolerance = 1e-12;
  double divisor_floor = 1e-14;
  std::uint64_t seed = 0;
  EtaGrid eta;
  std::vector<double> growth_eps{0.025, 0.05, 0.1, 0.2};
  std::optional<BarrierConfig> barrier;
  // Run settings; they do not change results and are left out of the normalized form.
  std::filesystem::path output_dir = "out";
  int workers = 1;

  /// Throws ValidationError naming the offending field.
  void validate() const;
  /// h, or h_list.
  std::vector<double> hs() const;
};

/// Built-in model with the standard run settings (h_list = 1/16, 1/24, 1/32, 1/48).
ScenarioConfig default_config(const std::string& model_name = "benchmark1");

/// Symbols may be inline objects or paths (resolved against `base_dir`).
ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every result-relevant field, symbols inline, fixed key order.
nlohmann::json config_to_json(const ScenarioConfig& c);
/// SHA-256 (hex) of the compact dump of config_to_json.
std::string config_hash(const ScenarioConfig& c);

}  // namespace quasispec
