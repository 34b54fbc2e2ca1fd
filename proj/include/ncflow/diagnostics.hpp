#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"

namespace ncflow {

/// Monitored quantities of one trajectory sample.
struct DiagnosticsRecord {
  double t = 0.0;
  double length = 0.0;
  double area = 0.0;
  double lambda = 0.0;
  double iso_difference = 0.0;
  double iso_ratio = 1.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double e_inf = 0.0;
  double grad_energy = 0.0;
  double phi_max = 0.0;
  double closure_defect = 0.0;
  double lin_tsai_slack = 0.0;
  double hoelder_slack = 0.0;
  double dLdt_formula = 0.0;
  double dAdt_formula = 0.0;
  /// Flow1: the variant-specific length rate, identical to dLdt_formula analytically.
  /// Flow2: the same rate with the coefficient (2L² − 2πA)/L² in place of
  /// (2L² − 4πA)/L². Kept alongside the general form so the two can be compared.
  double dLdt_printed = 0.0;
  double nu_max = 0.0;
  double moment_n = 0.0;  // ∮ρⁿ dθ
  Vec2 center;
};

DiagnosticsRecord make_record(const FlowState& state, const FlowConfig& config,
                              const AngularGrid& grid);
std::vector<DiagnosticsRecord> make_records(std::span<const FlowState> samples,
                                            const FlowConfig& config, const AngularGrid& grid);

/// πL/(L² − 2πA) ∮ρⁿ⁺¹dθ − ∮ρⁿdθ; non-negative iff the Lin–Tsai inequality holds.
double check_lin_tsai(const RadiusProfile& profile, double n, double length, double area);
/// (∮ρⁿ⁺¹dθ)^{1/(n+1)} (2π)^{n/(n+1)} − L; non-negative iff Hölder's inequality holds.
double check_hoelder(const RadiusProfile& profile, double n);

inline constexpr double kSlackTolerance = 1e-8;

inline bool lin_tsai_holds(double slack, double moment_n) {
  return slack >= -kSlackTolerance * moment_n;
}
inline bool hoelder_holds(double slack, double length) {
  return slack >= -kSlackTolerance * length;
}

/// Lower bound on the exponential decay rate of L² − 4πA: 2(4πA₀)^{n/2} / (L₀(2π)^{n−1}).
double theoretical_decay_rate(double length0, double area0, double n);

struct DecayFit {
  double t_begin = 0.0;
  double t_end = 0.0;
  double measured_rate = 0.0;  // minus the least-squares slope of the log
  double theoretical_rate = 0.0;
  double r_squared = 1.0;
  std::size_t samples_used = 0;
  bool vacuous = false;  // nothing above the noise floor to fit
  bool monotone = true;
  bool pass = false;
};

/// Least-squares slope of log Q over the longest run of samples with Q above
/// 1e2 · ε_machine · L(0)². Passes iff measured ≥ 0.98 × theoretical.
/// Throws InsufficientData when fewer than 10 samples are usable.
DecayFit fit_decay(std::span<const DiagnosticsRecord> records, double n);

/// Log-linear fit of ∮ν_θ² dθ over the second half of its above-floor window.
/// Passes iff the tail is monotone decreasing with negative slope and r² ≥ 0.99.
DecayFit grad_energy_decay(std::span<const DiagnosticsRecord> records);

struct PrincipleCheck {
  bool pass = true;
  double worst_margin = 0.0;  // min over samples of bound − running max Φ
};

/// max_{[0,t]} Φ ≤ max{ max_{[0,t]} ν², Φ(0) } + 1e-8 at every sample.
PrincipleCheck check_phi_principle(std::span<const DiagnosticsRecord> records);

struct BoundsCheck {
  bool length_bounds = true;
  bool area_bounds = true;
  bool iso_ratio_monotone = true;
  bool iso_ratio_strict = true;  // strictly decreasing while Q is above the noise floor
  bool pass() const { return length_bounds && area_bounds && iso_ratio_monotone; }
};

/// √(4πA₀) ≤ L ≤ L₀, A₀ ≤ A ≤ L₀²/4π, and non-increasing L²/4πA, 1e-9 relative tolerance.
BoundsCheck check_bounds(std::span<const DiagnosticsRecord> records);

struct MonotonicityCheck {
  bool length_nonincreasing = true;
  bool area_nondecreasing = true;
  bool iso_ratio_nonincreasing = true;
  bool iso_difference_nonincreasing = true;
  double worst_length_increase = 0.0;  // relative to L₀
  double worst_area_decrease = 0.0;    // relative to A₀
  bool pass() const {
    return length_nonincreasing && area_nondecreasing && iso_ratio_nonincreasing &&
           iso_difference_nonincreasing;
  }
};

/// Sample-to-sample monotonicity with the given relative slack.
MonotonicityCheck check_monotonicity(std::span<const DiagnosticsRecord> records,
                                     double relative_slack = 1e-10);

struct RateCheck {
  double dLdt_formula = 0.0;
  double dAdt_formula = 0.0;
  double dLdt_fd = 0.0;
  double dAdt_fd = 0.0;
  bool signs_ok = true;
};

/// Rate formulas at an interior sample against centred differences of its neighbours.
RateCheck check_rate_formulas(std::span<const DiagnosticsRecord> records, std::size_t index);

/// dL/dt ≤ tol and dA/dt ≥ −tol on every record, tol relative to ∮ρⁿ and ∮ρⁿ⁺¹ scale.
bool rate_signs_ok(std::span<const DiagnosticsRecord> records);

struct LimitCircle {
  double radius = 0.0;
  Vec2 center;
  double max_deviation = 0.0;  // max_θ | ‖X(θ) − center‖ − radius |
};

/// Radius L/2π and Steiner centre of the final state. Throws NotConverged unless
/// the run converged.
LimitCircle limit_circle(const RunResult& run, const FlowConfig& config, const AngularGrid& grid);

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunDiagnostics {
  std::vector<DiagnosticsRecord> records;
  DecayFit iso_decay;
  DecayFit energy_decay;
  PrincipleCheck phi;
  BoundsCheck bounds;
  MonotonicityCheck monotonicity;
  bool has_limit = false;
  LimitCircle limit;
  std::vector<Verdict> verdicts;
  bool all_pass() const;
};

RunDiagnostics diagnose(const RunResult& run, const FlowConfig& config, const AngularGrid& grid);

}  // namespace ncflow
