#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ncflow/geometry.hpp"

namespace ncflow {

/// The two nonlocal terms. Both evolve X_t = (λ(t) − κ⁻ⁿ) N_in with
///   Flow1: λ = L / (2L² − 4πA) · ∮κ⁻ⁿ ds
///   Flow2: λ = (L² − 2πA) / (πL²) · ∮κ¹⁻ⁿ ds
enum class FlowVariant { Flow1, Flow2 };

std::string_view to_string(FlowVariant v);

struct FlowConfig {
  FlowVariant variant = FlowVariant::Flow1;
  double n = 1.0;
  int grid_size = 512;
  double cfl_safety = 0.25;
  double t_end = 10.0;
  double sample_dt = 0.01;
  double eps_blowup = 1e-8;
  double eps_converged = 1e-10;
  bool closure_projection = false;

  /// p = 1 − 1/n, the exponent of the diffusion coefficient nν^p.
  double p() const { return 1.0 - 1.0 / n; }

  /// Throws ValidationError naming the violated constraint.
  void validate() const;
};

/// ν_i = ρ_i^n together with the global quantities it determines.
struct FlowState {
  double t = 0.0;
  std::vector<double> nu;
  double length = 0.0;
  double area = 0.0;
  double lambda = 0.0;
  /// Steiner point of the evolving curve; it moves with (1/π)∮ν(cosθ, sinθ)dθ.
  Vec2 center;
};

enum class StepStatus { Running, Converged, BlowUp, NumericalFailure };

std::string_view to_string(StepStatus s);

struct StepOutcome {
  StepStatus status = StepStatus::Running;
  /// The advanced state, or the last accepted one when the step was rejected.
  FlowState state;
};

struct RunResult {
  std::vector<FlowState> samples;
  StepOutcome final;
  std::size_t steps = 0;
};

/// ρ = ν^{1/n} with cheap paths for n ∈ {1, 2, 3}.
std::vector<double> radius_from_nu(std::span<const double> nu, double n);

/// Nonlocal term for the given ν. Throws DegenerateGeometry if L ≤ 0 or A ≤ 0.
double lambda_nonlocal(std::span<const double> nu, const FlowConfig& config,
                       const AngularGrid& grid);
double lambda_nonlocal(const FlowState& state, const FlowConfig& config);

/// Semi-discrete right-hand side n ν_i^p (δ²ν_i + ν_i − λ) with periodic indexing.
///
/// δ² is the three-point second difference divided by 4 sin²(Δθ/2) instead of Δθ²;
/// the two agree to O(Δθ²), and with this scaling δ² + 1 annihilates the first Fourier
/// mode exactly, so the closure of ρ is conserved by the semi-discrete system.
std::vector<double> rhs(std::span<const double> nu, double lambda, double n,
                        const AngularGrid& grid);

/// cfl_safety · Δθ² / (2 n max_i ν_i^p).
double stable_dt(std::span<const double> nu, const FlowConfig& config);

/// sup_i |ν_i − (L/2π)ⁿ|.
double equilibrium_error(std::span<const double> nu, double length, double n);

/// Integrates ν_t = nν^p(ν_θθ + ν − λ(t)) with classical RK4, recomputing λ at every stage.
///
/// A solver owns scratch buffers and must not be shared between threads; states are plain
/// values and may be handed between solvers freely.
class FlowSolver {
 public:
  explicit FlowSolver(FlowConfig config);
  FlowSolver(FlowConfig config, AngularGrid grid);

  const FlowConfig& config() const noexcept { return config_; }
  const AngularGrid& grid() const noexcept { return grid_; }

  /// The initial curve is placed with its Steiner point at `center`.
  FlowState initial_state(const RadiusProfile& initial, Vec2 center = {}) const;

  /// Radius profile of a state (validated: positivity and closure).
  RadiusProfile profile(const FlowState& state) const;

  StepOutcome step(const FlowState& state);
  StepOutcome step(const FlowState& state, double dt);

  /// Steps until t_end, convergence, blow-up or failure, sampling every sample_dt.
  RunResult run(const RadiusProfile& initial);
  RunResult run(const FlowState& initial);

 private:
  enum class StageResult { Ok, BlowUp, Failure };

  struct StageGeometry {
    double length = 0.0;
    double area = 0.0;
    double lambda = 0.0;
    Vec2 center_velocity;
  };

  StageResult evaluate(std::span<const double> nu, StageGeometry& geo);
  void derivative(std::span<const double> nu, double lambda, std::span<double> out);
  bool converged(const FlowState& s) const;

  FlowConfig config_;
  AngularGrid grid_;
  std::vector<double> rho_, k1_, k2_, k3_, k4_, stage_;
};

StepOutcome step(const FlowState& state, const FlowConfig& config);
RunResult run(const FlowConfig& config, const RadiusProfile& initial);

}  // namespace ncflow
