#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace hypercross::cli;
  CLI::App app{"hypercross: Smolyak quasi-interpolation experiments on the torus"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::string out_dir = "hypercross-out";

  const std::map<std::string, std::pair<std::string, std::function<int(const RunContext&)>>> commands{
      {"rates", {"convergence sweep of T_n with a fitted rate", cmd_rates}},
      {"conditions", {"kernel/averager condition table", cmd_conditions}},
      {"lp-check", {"discrete quasi-norm vs Besov/Triebel-Lizorkin norm ratios", cmd_lp_check}},
      {"sharpness", {"zeroth coefficient of T_n on the lacunary witness", cmd_sharpness}},
      {"grid-info", {"sparse grid sizes, cross cardinalities, combination plan", cmd_grid_info}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "TOML experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--out", out_dir, "output directory (HYPERCROSS_OUT overrides)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (const char* env = std::getenv("HYPERCROSS_OUT"); env != nullptr && *env != '\0') out_dir = env;

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    const ExperimentConfig cfg = load_config(config_path);
    const RunContext ctx{cfg, jobs, out_dir};
    const int code = commands.at(chosen->get_name()).second(ctx);
    return code == 0 ? 0 : kExitChecksFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
