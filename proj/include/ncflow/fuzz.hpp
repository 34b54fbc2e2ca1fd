#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ncflow/geometry.hpp"

namespace ncflow {

/// Random ρ = 1 + Σ_{k=2}^{max_mode} (a_k cos kθ + b_k sin kθ), redrawn until positive on
/// the grid. Coefficient magnitudes are drawn up to amplitude / (k − 1).
family::Fourier random_convex_fourier(std::mt19937_64& rng, const AngularGrid& grid,
                                      double amplitude = 0.6, int max_mode = 8);

/// Single-line JSON holding the coefficients; parse_fourier inverts it exactly.
std::string serialize(const family::Fourier& f);
family::Fourier parse_fourier(const std::string& text);

struct FuzzOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  std::vector<double> n_set{1.0, 1.5, 2.0, 3.0};
  int grid_size = 256;
  bool force_circle = false;  // every profile is the unit circle
};

struct FuzzViolation {
  std::string inequality;  // "lin_tsai", "hoelder" or "isoperimetric"
  double n = 0.0;
  double slack = 0.0;
  std::string profile;  // serialize() output, replayable
};

struct FuzzReport {
  std::size_t checked = 0;
  std::size_t invalid_input = 0;
  double worst_lin_tsai = INFINITY;  // min relative slack seen
  double worst_hoelder = INFINITY;
  double worst_isoperimetric = INFINITY;
  double max_abs_slack = 0.0;  // largest |slack| of any check, relative
  std::vector<FuzzViolation> violations;
};

/// Checks Lin–Tsai, Hölder and L² ≥ 4πA (area from the reconstructed curve) on each
/// profile for each exponent. Profiles that fail validation are counted as invalid input.
void check_profile(const family::Fourier& f, std::span<const double> n_set,
                   const AngularGrid& grid, FuzzReport& report);

FuzzReport fuzz_inequalities(const FuzzOptions& options);

/// JSON report including every violation.
std::string report_json(const FuzzOptions& options, const FuzzReport& report);

}  // namespace ncflow
