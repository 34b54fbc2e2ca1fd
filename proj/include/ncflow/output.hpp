#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "ncflow/config.hpp"
#include "ncflow/diagnostics.hpp"
#include "ncflow/flow.hpp"

namespace ncflow {

/// Writes to a sibling temporary file and renames it over `path`. Throws Io.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string timeseries_csv(std::span<const DiagnosticsRecord> records);

/// theta, rho, nu, x, y with the curve placed at the state's Steiner point.
std::string snapshot_csv(const FlowState& state, const FlowConfig& config, const AngularGrid& grid);

struct RunReport {
  std::string status;  // converged, horizon, blow_up, numerical_failure, invalid_input, diagnostic_failure
  int exit_code = 0;
  std::string message;
};

std::string summary_json(const RunManifest& manifest, const RunReport& report,
                         const RunResult* run, const RunDiagnostics* diagnostics,
                         const AngularGrid* grid);

}  // namespace ncflow
