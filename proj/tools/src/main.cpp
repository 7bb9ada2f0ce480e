#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rdlab/errors.hpp"

int main(int argc, char** argv) {
  using namespace rdlab::app;

  CLI::App app{"rdlab: radial reaction-diffusion experiments"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions opts;
  bool seedless = false;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "evolve one initial datum, record energy, fronts and snapshots"},
      {"groundstate", "shoot over center values and validate ground states"},
      {"wave", "1D front speed and profile"},
      {"threshold", "bisect a monotone family for the sharp threshold"},
      {"scan", "classify an explicit list of family parameters"}};
  for (const auto& [name, about] : commands) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", opts.workers, "parallel runs")->capture_default_str();
    // The numerics use no random numbers, so this only documents intent.
    sub->add_flag("--seedless", seedless, "deterministic numerics (always on)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig cfg = load_config(config_path, command);
    return dispatch(cfg, opts, std::cout);
  } catch (const rdlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rdlab::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
