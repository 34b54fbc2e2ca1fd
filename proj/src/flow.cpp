#include "ncflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ncflow/error.hpp"

namespace ncflow {
namespace {

constexpr double kPi = std::numbers::pi;

struct Moments {
  double length = 0.0;  // ∮ρ
  double nu = 0.0;      // ∮ν = ∮ρⁿ
  double nu_rho = 0.0;  // ∮νρ = ∮ρⁿ⁺¹
};

Moments moments(std::span<const double> nu, std::span<const double> rho, double h) {
  Moments m;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    m.length += rho[i];
    m.nu += nu[i];
    m.nu_rho += nu[i] * rho[i];
  }
  m.length *= h;
  m.nu *= h;
  m.nu_rho *= h;
  return m;
}

// With Q = L² − 4πA the denominators become 2L² − 4πA = L² + Q and
// L² − 2πA = (L² + Q)/2, both free of cancellation.
double lambda_from(FlowVariant v, const Moments& m, double q) {
  const double l2 = m.length * m.length;
  if (v == FlowVariant::Flow1) return m.length / (l2 + q) * m.nu_rho;
  return (l2 + q) / (2.0 * kPi * l2) * m.nu;
}

void radius_into(std::span<const double> nu, double n, std::span<double> rho) {
  if (n == 1.0) {
    std::copy(nu.begin(), nu.end(), rho.begin());
  } else if (n == 2.0) {
    for (std::size_t i = 0; i < nu.size(); ++i) rho[i] = std::sqrt(nu[i]);
  } else if (n == 3.0) {
    for (std::size_t i = 0; i < nu.size(); ++i) rho[i] = std::cbrt(nu[i]);
  } else {
    const double e = 1.0 / n;
    for (std::size_t i = 0; i < nu.size(); ++i) rho[i] = std::pow(nu[i], e);
  }
}

double nu_from_radius(double rho, double n) {
  if (n == 1.0) return rho;
  if (n == 2.0) return rho * rho;
  if (n == 3.0) return rho * rho * rho;
  return std::pow(rho, n);
}

void rhs_into(std::span<const double> nu, std::span<const double> rho, double lambda, double n,
              const AngularGrid& grid, std::span<double> out) {
  const std::size_t size = nu.size();
  const double half = 0.5 * grid.spacing();
  const double inv = 1.0 / (4.0 * std::sin(half) * std::sin(half));
  for (std::size_t i = 0; i < size; ++i) {
    const double prev = nu[i == 0 ? size - 1 : i - 1];
    const double next = nu[i + 1 == size ? 0 : i + 1];
    const double lap = (next - 2.0 * nu[i] + prev) * inv;
    out[i] = n * (nu[i] / rho[i]) * (lap + nu[i] - lambda);
  }
}

}  // namespace

std::string_view to_string(FlowVariant v) { return v == FlowVariant::Flow1 ? "flow1" : "flow2"; }

std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Running: return "running";
    case StepStatus::Converged: return "converged";
    case StepStatus::BlowUp: return "blow_up";
    case StepStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void FlowConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (!(n >= 1.0) || !std::isfinite(n)) fail("exponent must satisfy n >= 1, got " + std::to_string(n));
  if (grid_size < 16 || grid_size % 2 != 0) fail("grid_size must be even and >= 16");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) fail("cfl_safety must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be positive");
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) fail("sample_dt must be positive");
  if (!(eps_blowup > 0.0)) fail("eps_blowup must be positive");
  if (!(eps_converged >= 0.0)) fail("eps_converged must be non-negative");
}

std::vector<double> radius_from_nu(std::span<const double> nu, double n) {
  std::vector<double> rho(nu.size());
  radius_into(nu, n, rho);
  return rho;
}

double lambda_nonlocal(std::span<const double> nu, const FlowConfig& config,
                       const AngularGrid& grid) {
  const auto rho = radius_from_nu(nu, config.n);
  const Moments m = moments(nu, rho, grid.spacing());
  const double q = iso_difference(grid, rho);
  const double a = (m.length * m.length - q) / (4.0 * kPi);
  if (!(m.length > 0.0) || !(a > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry, "length and area must be positive");
  }
  return lambda_from(config.variant, m, q);
}

double lambda_nonlocal(const FlowState& state, const FlowConfig& config) {
  return lambda_nonlocal(state.nu, config, AngularGrid::build(config.grid_size));
}

std::vector<double> rhs(std::span<const double> nu, double lambda, double n,
                        const AngularGrid& grid) {
  const auto rho = radius_from_nu(nu, n);
  std::vector<double> out(nu.size());
  rhs_into(nu, rho, lambda, n, grid, out);
  return out;
}

double stable_dt(std::span<const double> nu, const FlowConfig& config) {
  const double h = 2.0 * kPi / config.grid_size;
  const double p = config.p();
  double coeff = 1.0;
  if (p != 0.0) {
    const double top = *std::max_element(nu.begin(), nu.end());
    coeff = std::pow(top, p);
  }
  return config.cfl_safety * h * h / (2.0 * config.n * coeff);
}

double equilibrium_error(std::span<const double> nu, double length, double n) {
  const double target = nu_from_radius(length / (2.0 * kPi), n);
  double e = 0.0;
  for (double v : nu) e = std::max(e, std::abs(v - target));
  return e;
}

FlowSolver::FlowSolver(FlowConfig config)
    : FlowSolver(config, AngularGrid::build(config.grid_size)) {}

FlowSolver::FlowSolver(FlowConfig config, AngularGrid grid)
    : config_(config), grid_(std::move(grid)) {
  config_.validate();
  if (grid_.size() != config_.grid_size) {
    throw Error(ErrorKind::InvalidSize, "grid does not match config.grid_size");
  }
  const auto n = static_cast<std::size_t>(grid_.size());
  for (auto* v : {&rho_, &k1_, &k2_, &k3_, &k4_, &stage_}) v->assign(n, 0.0);
}

FlowState FlowSolver::initial_state(const RadiusProfile& initial, Vec2 center) const {
  if (!(initial.grid() == grid_)) {
    throw Error(ErrorKind::InvalidSize, "initial profile grid does not match config.grid_size");
  }
  FlowState s;
  s.nu.resize(initial.rho().size());
  for (std::size_t i = 0; i < s.nu.size(); ++i) s.nu[i] = nu_from_radius(initial.rho()[i], config_.n);
  const auto rho = radius_from_nu(s.nu, config_.n);
  const Moments m = moments(s.nu, rho, grid_.spacing());
  const double q = iso_difference(grid_, rho);
  s.length = m.length;
  s.area = (m.length * m.length - q) / (4.0 * kPi);
  s.lambda = lambda_from(config_.variant, m, q);
  s.center = center;
  return s;
}

RadiusProfile FlowSolver::profile(const FlowState& state) const {
  return RadiusProfile(grid_, radius_from_nu(state.nu, config_.n));
}

FlowSolver::StageResult FlowSolver::evaluate(std::span<const double> nu, StageGeometry& geo) {
  double lo = nu[0];
  for (double v : nu) {
    if (!std::isfinite(v)) return StageResult::Failure;
    lo = std::min(lo, v);
  }
  if (lo < config_.eps_blowup) return StageResult::BlowUp;

  radius_into(nu, config_.n, rho_);
  const Moments m = moments(nu, rho_, grid_.spacing());
  const double q = iso_difference(grid_, rho_);
  geo.length = m.length;
  geo.area = (m.length * m.length - q) / (4.0 * kPi);
  if (!(geo.length > 0.0) || !(geo.area > 0.0) || !std::isfinite(q)) return StageResult::Failure;
  geo.lambda = lambda_from(config_.variant, m, q);
  if (!(geo.lambda > 0.0) || !std::isfinite(geo.lambda)) return StageResult::Failure;
  geo.center_velocity = (1.0 / kPi) * closure_defect(grid_, nu);
  return StageResult::Ok;
}

void FlowSolver::derivative(std::span<const double> nu, double lambda, std::span<double> out) {
  rhs_into(nu, rho_, lambda, config_.n, grid_, out);
}

bool FlowSolver::converged(const FlowState& s) const {
  return equilibrium_error(s.nu, s.length, config_.n) < config_.eps_converged;
}

StepOutcome FlowSolver::step(const FlowState& state) {
  return step(state, stable_dt(state.nu, config_));
}

StepOutcome FlowSolver::step(const FlowState& state, double dt) {
  auto reject = [&](StageResult r) {
    return StepOutcome{r == StageResult::BlowUp ? StepStatus::BlowUp : StepStatus::NumericalFailure,
                       state};
  };
  if (state.nu.size() != rho_.size()) {
    throw Error(ErrorKind::InvalidSize, "state does not match the solver grid");
  }
  const std::size_t size = state.nu.size();
  std::span<const double> nu0 = state.nu;
  StageGeometry g1, g2, g3, g4;

  if (auto r = evaluate(nu0, g1); r != StageResult::Ok) return reject(r);
  derivative(nu0, g1.lambda, k1_);

  for (std::size_t i = 0; i < size; ++i) stage_[i] = nu0[i] + 0.5 * dt * k1_[i];
  if (auto r = evaluate(stage_, g2); r != StageResult::Ok) return reject(r);
  derivative(stage_, g2.lambda, k2_);

  for (std::size_t i = 0; i < size; ++i) stage_[i] = nu0[i] + 0.5 * dt * k2_[i];
  if (auto r = evaluate(stage_, g3); r != StageResult::Ok) return reject(r);
  derivative(stage_, g3.lambda, k3_);

  for (std::size_t i = 0; i < size; ++i) stage_[i] = nu0[i] + dt * k3_[i];
  if (auto r = evaluate(stage_, g4); r != StageResult::Ok) return reject(r);
  derivative(stage_, g4.lambda, k4_);

  FlowState next;
  next.t = state.t + dt;
  next.nu.resize(size);
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < size; ++i) {
    next.nu[i] = nu0[i] + w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
  next.center = state.center + w * (g1.center_velocity + 2.0 * g2.center_velocity +
                                    2.0 * g3.center_velocity + g4.center_velocity);

  if (config_.closure_projection) {
    radius_into(next.nu, config_.n, rho_);
    const Vec2 d = (1.0 / kPi) * closure_defect(grid_, rho_);
    for (std::size_t i = 0; i < size; ++i) {
      const double r = rho_[i] - d.x * grid_.cos_table()[i] - d.y * grid_.sin_table()[i];
      next.nu[i] = nu_from_radius(r, config_.n);
    }
  }

  StageGeometry gn;
  if (auto r = evaluate(next.nu, gn); r != StageResult::Ok) return reject(r);
  next.length = gn.length;
  next.area = gn.area;
  next.lambda = gn.lambda;
  return {converged(next) ? StepStatus::Converged : StepStatus::Running, std::move(next)};
}

RunResult FlowSolver::run(const RadiusProfile& initial) { return run(initial_state(initial)); }

RunResult FlowSolver::run(const FlowState& initial) {
  RunResult result;
  result.samples.push_back(initial);
  FlowState current = initial;
  StepStatus status = StepStatus::Running;
  long long sample_index = 1;
  const double t0 = initial.t;

  while (true) {
    const double next_sample = t0 + static_cast<double>(sample_index) * config_.sample_dt;
    const double target = std::min(next_sample, config_.t_end);
    const double remaining = target - current.t;
    double dt = stable_dt(current.nu, config_);
    const bool lands = remaining <= dt * (1.0 + 1e-9);
    if (lands) dt = remaining;

    StepOutcome out = step(current, dt);
    ++result.steps;
    if (out.status == StepStatus::BlowUp || out.status == StepStatus::NumericalFailure) {
      status = out.status;
      break;
    }
    current = std::move(out.state);
    if (lands) {
      current.t = target;
      if (target == next_sample) ++sample_index;
    }
    status = out.status;
    const bool horizon = lands && target == config_.t_end;
    if (status == StepStatus::Converged || horizon) break;
    if (lands) result.samples.push_back(current);
  }
  if (result.samples.back().t != current.t) result.samples.push_back(current);
  result.final = {status, std::move(current)};
  return result;
}

StepOutcome step(const FlowState& state, const FlowConfig& config) {
  FlowSolver solver(config);
  return solver.step(state);
}

RunResult run(const FlowConfig& config, const RadiusProfile& initial) {
  FlowSolver solver(config, initial.grid());
  return solver.run(initial);
}

}  // namespace ncflow
