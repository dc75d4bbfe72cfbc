#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "commands.hpp"

using namespace iscat;
using namespace iscat::cli;

int main(int argc, char** argv) {
  CLI::App app{"Inverse medium scattering: synthetic data, Gauss-Newton reconstruction, defect localization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string strategy;
  std::size_t workers = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", output_dir, "Output directory (overrides output.directory)");
  };
  auto* synth = app.add_subcommand("synth", "Generate the data mesh and the (noisy) far-field data");
  add_common(synth);
  auto* reconstruct = app.add_subcommand("reconstruct", "Run a reconstruction strategy on data.farfield");
  add_common(reconstruct);
  reconstruct->add_option("-s,--strategy", strategy, "full, selective, adaptive or combined")
      ->check(CLI::IsMember({"full", "selective", "adaptive", "combined"}));
  auto* loc = app.add_subcommand("localize", "Defect localization map against the initial guess");
  add_common(loc);
  auto* sweep = app.add_subcommand("sweep", "Run the [sweep] grid and tabulate the results");
  add_common(sweep);
  sweep->add_option("-j,--workers", workers, "Concurrent cells (overrides sweep.workers)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    Experiment ex = load_experiment(config_path);
    if (!output_dir.empty()) ex.output_dir = output_dir;
    if (workers > 0) ex.sweep.workers = workers;
    if (*synth) return run_synth(ex);
    if (*reconstruct) return run_reconstruct(ex, strategy.empty() ? ex.strategy : strategy);
    if (*loc) return run_localize(ex);
    return run_sweep(ex);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const EmptySelection& e) {
    std::cerr << "empty selection: " << e.what() << "\n";
    return kEmptySelection;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kConfigError;
  }
}
