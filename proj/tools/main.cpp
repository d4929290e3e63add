#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace quasispec;

int main(int argc, char** argv) {
  CLI::App app{"Quasi-eigenvalue prediction and verification for non-selfadjoint perturbations on T*T^2"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(QUASISPEC_VERSION));
  app.require_subcommand(1, 1);

  std::string config_path, model, out_dir;
  std::optional<double> h, eps;
  std::optional<int> order, workers;
  app.add_option("--config", config_path, "Scenario JSON")->check(CLI::ExistingFile);
  app.add_option("--model", model, "Built-in model (benchmark1, linear)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--h", h, "Single semiclassical parameter (replaces h_list)");
  app.add_option("--eps", eps, "Perturbation strength epsilon");
  app.add_option("--order", order, "Normal form order N");
  app.fallthrough();

  for (const auto& name : cli::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ScenarioConfig config;
  try {
    config = config_path.empty() ? default_config(model.empty() ? "benchmark1" : model) : load_config(config_path);
    if (!config_path.empty() && !model.empty()) {
      const Model m = builtin_model(model);
      config.model = m;
    }
    if (h) {
      config.h = *h;
      config.h_list.clear();
    }
    if (eps) config.epsilon = *eps;
    if (order) config.N = *order;
    if (workers) config.workers = *workers;
    if (!out_dir.empty()) config.output_dir = out_dir;
  } catch (const Error& e) {
    std::cerr << sub << ": validation error: " << e.what() << "\n";
    return cli::kExitValidation;
  }
  return cli::run(sub, config, std::cerr);
}
