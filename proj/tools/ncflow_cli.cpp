#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "ncflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal curvature flows of convex closed curves"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output_dir;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Directory for outputs (overrides the config)");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  std::string config;
  auto* run = app.add_subcommand("run", "Run one configuration with full diagnostics");
  run->add_option("config", config, "Flat JSON configuration")->required()->check(CLI::ExistingFile);

  std::string sweep_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Run every *.json configuration in a directory");
  sweep->add_option("dir", sweep_dir, "Directory of configurations")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  ncflow::FuzzOptions fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz-inequalities", "Check Lin-Tsai, Hoelder and isoperimetric inequalities on random profiles");
  fuzz_cmd->add_option("--count", fuzz.count, "Number of random profiles")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--seed", fuzz.seed, "Generator seed");
  fuzz_cmd->add_option("--n", fuzz.n_set, "Exponents (each >= 1)")->expected(1, -1);
  fuzz_cmd->add_option("--grid", fuzz.grid_size, "Angular grid size");
  fuzz_cmd->add_flag("--circle", fuzz.force_circle, "Use the unit circle for every profile");

  auto* verify = app.add_subcommand("verify", "Compare the angular solver with the marker oracle");

  CLI11_PARSE(app, argc, argv);

  ncflow::CommandOptions options;
  options.quiet = quiet;
  if (!output_dir.empty()) options.output_dir = output_dir;

  try {
    if (run->parsed()) return ncflow::run_config_file(config, options);
    if (sweep->parsed()) return ncflow::sweep_command(sweep_dir, options, jobs);
    if (fuzz_cmd->parsed()) return ncflow::fuzz_command(fuzz, options);
    if (verify->parsed()) return ncflow::verify_command(options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ncflow::exit_code::kFailure;
  }
  return ncflow::exit_code::kFailure;
}
