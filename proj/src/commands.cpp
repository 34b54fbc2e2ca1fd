#include "ncflow/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>

#include "ncflow/error.hpp"
#include "ncflow/numfmt.hpp"
#include "ncflow/oracle.hpp"

namespace ncflow {
namespace fs = std::filesystem;

RunOutcome execute(const RunManifest& manifest) {
  RunOutcome out;
  const FlowConfig& config = manifest.config;
  std::optional<RadiusProfile> initial;
  try {
    config.validate();
    out.grid = AngularGrid::build(config.grid_size);
    initial.emplace(initial_profile(manifest.initial, *out.grid));
  } catch (const Error& e) {
    out.report = {"invalid_input", exit_code::kInvalidInput, e.what()};
    return out;
  }

  FlowSolver solver(config, *out.grid);
  out.run = solver.run(solver.initial_state(*initial, manifest.center));
  const StepStatus status = out.run->final.status;
  switch (status) {
    case StepStatus::Converged:
      out.report = {"converged", exit_code::kOk, ""};
      break;
    case StepStatus::Running:
      out.report = {"horizon", exit_code::kOk, "t_end reached before convergence"};
      break;
    case StepStatus::BlowUp:
      out.report = {"blow_up", exit_code::kBlowUp, "min nu fell below eps_blowup"};
      break;
    case StepStatus::NumericalFailure:
      out.report = {"numerical_failure", exit_code::kFailure, "non-finite or degenerate state"};
      break;
  }
  try {
    out.diagnostics = diagnose(*out.run, config, *out.grid);
    if (out.report.exit_code == exit_code::kOk && !out.diagnostics->all_pass()) {
      std::string failed;
      for (const auto& v : out.diagnostics->verdicts) {
        if (!v.pass) failed += (failed.empty() ? "" : ", ") + v.name;
      }
      out.report = {"diagnostic_failure", exit_code::kFailure, "failed: " + failed};
    }
  } catch (const Error& e) {
    if (out.report.exit_code == exit_code::kOk) {
      out.report = {"diagnostic_failure", exit_code::kFailure, e.what()};
    }
  }
  return out;
}

namespace {

fs::path output_dir_for(const RunManifest& manifest, const CommandOptions& options) {
  return options.output_dir ? *options.output_dir : manifest.output_dir;
}

void write_outputs(const fs::path& dir, const RunManifest& manifest, const RunOutcome& out) {
  fs::create_directories(dir);
  const RunResult* run = out.run ? &*out.run : nullptr;
  const RunDiagnostics* diag = out.diagnostics ? &*out.diagnostics : nullptr;
  const AngularGrid* grid = out.grid ? &*out.grid : nullptr;
  if (diag != nullptr) write_atomic(dir / "timeseries.csv", timeseries_csv(diag->records));
  if (run != nullptr && grid != nullptr && !run->samples.empty()) {
    const std::size_t last = run->samples.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
      const bool keep = k == 0 || k == last ||
                        (manifest.snapshot_every > 0 &&
                         k % static_cast<std::size_t>(manifest.snapshot_every) == 0);
      if (!keep) continue;
      write_atomic(dir / ("snapshot_" + std::to_string(k) + ".csv"),
                   snapshot_csv(run->samples[k], manifest.config, *grid));
    }
  }
  write_atomic(dir / "summary.json", summary_json(manifest, out.report, run, diag, grid));
}

}  // namespace

int run_command(const RunManifest& manifest, const CommandOptions& options) {
  const RunOutcome out = execute(manifest);
  const fs::path dir = output_dir_for(manifest, options);
  try {
    write_outputs(dir, manifest, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::kInvalidInput;
  }
  if (!options.quiet) {
    std::cout << "status " << out.report.status << " exit " << out.report.exit_code;
    if (out.run) {
      std::cout << " t " << format_number(out.run->final.state.t) << " steps " << out.run->steps;
    }
    std::cout << " -> " << dir.string() << "\n";
    if (!out.report.message.empty()) std::cout << "  " << out.report.message << "\n";
  }
  return out.report.exit_code;
}

int run_config_file(const fs::path& config, const CommandOptions& options) {
  RunManifest manifest;
  try {
    manifest = load_config(config);
  } catch (const Error& e) {
    std::cerr << config.string() << ": " << e.what() << "\n";
    return exit_code::kInvalidInput;
  }
  return run_command(manifest, options);
}

int sweep_command(const fs::path& dir, const CommandOptions& options, unsigned jobs) {
  std::vector<fs::path> configs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      configs.push_back(entry.path());
    }
  }
  if (ec) {
    std::cerr << "cannot list " << dir.string() << ": " << ec.message() << "\n";
    return exit_code::kInvalidInput;
  }
  std::sort(configs.begin(), configs.end());
  const fs::path base = options.output_dir ? *options.output_dir : dir / "sweep_out";

  std::vector<int> codes(configs.size(), 0);
  std::atomic<std::size_t> cursor{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = cursor++; i < configs.size(); i = cursor++) {
      CommandOptions local{base / configs[i].stem(), true};
      codes[i] = run_config_file(configs[i], local);
      if (!options.quiet) {
        std::lock_guard lock(io);
        std::cout << configs[i].filename().string() << " exit " << codes[i] << "\n";
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::jthread> pool;
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  pool.clear();
  return codes.empty() ? exit_code::kOk : *std::max_element(codes.begin(), codes.end());
}

int fuzz_command(const FuzzOptions& fuzz, const CommandOptions& options) {
  FuzzReport report;
  try {
    report = fuzz_inequalities(fuzz);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::kInvalidInput;
  }
  if (options.output_dir) {
    try {
      fs::create_directories(*options.output_dir);
      write_atomic(*options.output_dir / "fuzz_report.json", report_json(fuzz, report));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code::kInvalidInput;
    }
  }
  if (!options.quiet) {
    std::cout << "checked " << report.checked << " invalid " << report.invalid_input
              << " violations " << report.violations.size() << "\n"
              << "worst relative slack: lin_tsai " << format_number(report.worst_lin_tsai)
              << " hoelder " << format_number(report.worst_hoelder) << " isoperimetric "
              << format_number(report.worst_isoperimetric) << "\n";
    for (const auto& v : report.violations) {
      std::cout << "violation " << v.inequality << " n=" << format_number(v.n)
                << " slack=" << format_number(v.slack) << " profile=" << v.profile << "\n";
    }
  }
  return report.violations.empty() ? exit_code::kOk : exit_code::kFailure;
}

double oracle_distance(const FlowConfig& config, double a, double b, int resolution,
                       double horizon) {
  FlowConfig c = config;
  c.grid_size = resolution;
  c.t_end = horizon;
  c.sample_dt = horizon;
  c.eps_converged = 0.0;
  const AngularGrid grid = AngularGrid::build(resolution);
  const RadiusProfile initial = initial_profile(family::Ellipse{a, b}, grid);
  FlowSolver solver(c, grid);
  const RunResult run = solver.run(initial);
  if (run.final.status != StepStatus::Running || run.final.state.t != horizon) {
    throw Error(ErrorKind::NumericalFailure, "angular solver stopped early with status " +
                                                 std::string(to_string(run.final.status)));
  }
  const CurvePoints theta = reconstruct_curve(solver.profile(run.final.state), {});
  const MarkerCurve markers = marker_evolve(ellipse_markers(a, b, resolution), c, horizon);
  return compare(theta, markers);
}

int verify_command(const CommandOptions& options) {
  struct Case {
    const char* name;
    FlowVariant variant;
    double n, a, b, horizon, threshold;
    int resolution;
  };
  const Case cases[] = {
      {"circle flow1 n=1", FlowVariant::Flow1, 1.0, 1.0, 1.0, 0.1, 1e-10, 128},
      {"circle flow2 n=2", FlowVariant::Flow2, 2.0, 1.0, 1.0, 0.1, 1e-10, 128},
      {"ellipse flow1 n=1", FlowVariant::Flow1, 1.0, 2.0, 1.0, 0.1, 1e-3, 512},
      {"ellipse flow2 n=1", FlowVariant::Flow2, 1.0, 2.0, 1.0, 0.1, 1e-3, 512},
  };
  bool ok = true;
  for (const Case& c : cases) {
    FlowConfig config;
    config.variant = c.variant;
    config.n = c.n;
    double d = 0.0;
    bool pass = false;
    std::string detail;
    try {
      d = oracle_distance(config, c.a, c.b, c.resolution, c.horizon);
      pass = d <= c.threshold;
      detail = "distance " + format_number(d) + " threshold " + format_number(c.threshold);
    } catch (const Error& e) {
      detail = e.what();
    }
    ok = ok && pass;
    if (!options.quiet) std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << detail << "\n";
  }
  return ok ? exit_code::kOk : exit_code::kFailure;
}

}  // namespace ncflow
