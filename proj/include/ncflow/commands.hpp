#pragma once

#include <filesystem>
#include <optional>

#include "ncflow/config.hpp"
#include "ncflow/diagnostics.hpp"
#include "ncflow/fuzz.hpp"
#include "ncflow/output.hpp"

namespace ncflow {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // numerical failure or a failed diagnostic
inline constexpr int kBlowUp = 2;
inline constexpr int kInvalidInput = 3;
}  // namespace exit_code

struct CommandOptions {
  std::optional<std::filesystem::path> output_dir;  // overrides the manifest's
  bool quiet = false;
};

struct RunOutcome {
  RunReport report;
  std::optional<AngularGrid> grid;
  std::optional<RunResult> run;
  std::optional<RunDiagnostics> diagnostics;
};

/// Runs the solver and all diagnostics without touching the filesystem.
RunOutcome execute(const RunManifest& manifest);

/// execute() plus timeseries.csv, snapshot_<k>.csv and summary.json in the output directory.
int run_command(const RunManifest& manifest, const CommandOptions& options);
int run_config_file(const std::filesystem::path& config, const CommandOptions& options);

/// Every *.json in `dir`, each into <output>/<stem>/, on `jobs` worker threads.
/// Returns the largest exit code.
int sweep_command(const std::filesystem::path& dir, const CommandOptions& options, unsigned jobs);

/// Prints a summary; writes fuzz_report.json when an output directory is given.
/// Exit 0 iff there are no violations.
int fuzz_command(const FuzzOptions& fuzz, const CommandOptions& options);

/// Hausdorff distance between the angular solver and the marker oracle after evolving the
/// ellipse x²/a² + y²/b² = 1 to `horizon` with N = M = `resolution`.
double oracle_distance(const FlowConfig& config, double a, double b, int resolution, double horizon);

/// Oracle comparison suite; exit 0 iff every comparison is within its threshold.
int verify_command(const CommandOptions& options);

}  // namespace ncflow
