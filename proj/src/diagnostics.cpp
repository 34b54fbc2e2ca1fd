#include "ncflow/diagnostics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ncflow/error.hpp"

namespace ncflow {
namespace {

constexpr double kPi = std::numbers::pi;

double lin_tsai_slack(double moment_n, double moment_n1, double length, double area) {
  return kPi * length / (length * length - 2.0 * kPi * area) * moment_n1 - moment_n;
}

double hoelder_slack(double moment_n1, double n, double length) {
  return std::pow(moment_n1, 1.0 / (n + 1.0)) * std::pow(2.0 * kPi, n / (n + 1.0)) - length;
}

struct LineFit {
  double slope = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

DiagnosticsRecord make_record(const FlowState& state, const FlowConfig& config,
                              const AngularGrid& grid) {
  const std::span<const double> nu = state.nu;
  const std::size_t size = nu.size();
  const double n = config.n;
  const double h = grid.spacing();
  const auto rho = radius_from_nu(nu, n);

  DiagnosticsRecord r;
  r.t = state.t;
  double m_n = 0.0, m_n1 = 0.0, len = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    len += rho[i];
    m_n += nu[i];
    m_n1 += nu[i] * rho[i];
  }
  len *= h;
  m_n *= h;
  m_n1 *= h;
  r.length = len;
  r.iso_difference = iso_difference(grid, rho);
  r.area = (len * len - r.iso_difference) / (4.0 * kPi);
  r.iso_ratio = 1.0 + r.iso_difference / (4.0 * kPi * r.area);
  r.lambda = lambda_nonlocal(nu, config, grid);
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  r.kappa_min = 1.0 / *hi;
  r.kappa_max = 1.0 / *lo;
  r.e_inf = equilibrium_error(nu, len, n);

  double energy = 0.0, phi = 0.0, top = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double prev = nu[i == 0 ? size - 1 : i - 1];
    const double next = nu[i + 1 == size ? 0 : i + 1];
    const double d = (next - prev) / (2.0 * h);
    energy += d * d;
    phi = std::max(phi, nu[i] * nu[i] + d * d);
    top = std::max(top, nu[i]);
  }
  r.grad_energy = energy * h;
  r.phi_max = phi;
  r.nu_max = top;
  r.closure_defect = norm(closure_defect(grid, rho));
  r.moment_n = m_n;
  r.lin_tsai_slack = lin_tsai_slack(m_n, m_n1, len, r.area);
  r.hoelder_slack = hoelder_slack(m_n1, n, len);
  r.dLdt_formula = m_n - 2.0 * kPi * r.lambda;
  r.dAdt_formula = m_n1 - len * r.lambda;
  if (config.variant == FlowVariant::Flow1) {
    r.dLdt_printed = -kPi * len / (len * len - 2.0 * kPi * r.area) * m_n1 + m_n;
  } else {
    r.dLdt_printed = -(2.0 * len * len - 2.0 * kPi * r.area) / (len * len) * m_n + m_n;
  }
  r.center = state.center;
  return r;
}

std::vector<DiagnosticsRecord> make_records(std::span<const FlowState> samples,
                                            const FlowConfig& config, const AngularGrid& grid) {
  std::vector<DiagnosticsRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(make_record(s, config, grid));
  return out;
}

double check_lin_tsai(const RadiusProfile& profile, double n, double length, double area) {
  return lin_tsai_slack(moment(profile, n), moment(profile, n + 1.0), length, area);
}

double check_hoelder(const RadiusProfile& profile, double n) {
  return hoelder_slack(moment(profile, n + 1.0), n, ncflow::length(profile));
}

double theoretical_decay_rate(double length0, double area0, double n) {
  return 2.0 * std::pow(4.0 * kPi * area0, 0.5 * n) / (length0 * std::pow(2.0 * kPi, n - 1.0));
}

DecayFit fit_decay(std::span<const DiagnosticsRecord> records, double n) {
  if (records.empty()) throw Error(ErrorKind::InsufficientData, "no samples to fit");
  DecayFit fit;
  const double l0 = records.front().length;
  fit.theoretical_rate = theoretical_decay_rate(l0, records.front().area, n);
  const double floor = 1e2 * DBL_EPSILON * l0 * l0;

  std::size_t best_begin = 0, best_len = 0;
  for (std::size_t i = 0; i < records.size();) {
    if (!(records[i].iso_difference > floor)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < records.size() && records[j].iso_difference > floor) ++j;
    if (j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len == 0) {
    fit.vacuous = true;
    fit.pass = true;
    return fit;
  }
  if (best_len < 10) {
    throw Error(ErrorKind::InsufficientData,
                "only " + std::to_string(best_len) + " samples above the noise floor");
  }
  std::vector<double> t, y;
  for (std::size_t i = best_begin; i < best_begin + best_len; ++i) {
    t.push_back(records[i].t);
    y.push_back(std::log(records[i].iso_difference));
  }
  const LineFit lf = least_squares(t, y);
  fit.t_begin = t.front();
  fit.t_end = t.back();
  fit.measured_rate = -lf.slope;
  fit.r_squared = lf.r_squared;
  fit.samples_used = best_len;
  for (std::size_t i = 1; i < y.size(); ++i) fit.monotone = fit.monotone && y[i] <= y[i - 1];
  fit.pass = fit.measured_rate >= 0.98 * fit.theoretical_rate;
  return fit;
}

DecayFit grad_energy_decay(std::span<const DiagnosticsRecord> records) {
  if (records.empty()) throw Error(ErrorKind::InsufficientData, "no samples to fit");
  DecayFit fit;
  double emax = 0.0, numax = 0.0;
  for (const auto& r : records) {
    emax = std::max(emax, r.grad_energy);
    numax = std::max(numax, r.nu_max);
  }
  if (emax <= 1e-24 * std::max(1.0, numax * numax)) {
    fit.vacuous = true;
    fit.pass = true;
    return fit;
  }
  const double floor = 1e-22 * emax;
  std::size_t last = 0;
  while (last < records.size() && records[last].grad_energy > floor) ++last;
  const std::size_t first = last / 2;
  if (last - first < 10) {
    throw Error(ErrorKind::InsufficientData,
                "only " + std::to_string(last - first) + " tail samples above the noise floor");
  }
  std::vector<double> t, y;
  for (std::size_t i = first; i < last; ++i) {
    t.push_back(records[i].t);
    y.push_back(std::log(records[i].grad_energy));
  }
  const LineFit lf = least_squares(t, y);
  fit.t_begin = t.front();
  fit.t_end = t.back();
  fit.measured_rate = -lf.slope;
  fit.r_squared = lf.r_squared;
  fit.samples_used = t.size();
  for (std::size_t i = 1; i < y.size(); ++i) fit.monotone = fit.monotone && y[i] <= y[i - 1];
  fit.pass = fit.monotone && lf.slope < 0.0 && fit.r_squared >= 0.99;
  return fit;
}

PrincipleCheck check_phi_principle(std::span<const DiagnosticsRecord> records) {
  PrincipleCheck c;
  if (records.empty()) return c;
  const double phi0 = records.front().phi_max;
  double run_phi = 0.0, run_nu2 = 0.0;
  c.worst_margin = INFINITY;
  for (const auto& r : records) {
    run_phi = std::max(run_phi, r.phi_max);
    run_nu2 = std::max(run_nu2, r.nu_max * r.nu_max);
    c.worst_margin = std::min(c.worst_margin, std::max(run_nu2, phi0) - run_phi);
  }
  c.pass = c.worst_margin >= -1e-8;
  return c;
}

BoundsCheck check_bounds(std::span<const DiagnosticsRecord> records) {
  BoundsCheck b;
  if (records.empty()) return b;
  constexpr double tol = 1e-9;
  const auto& first = records.front();
  const double l0 = first.length;
  const double a0 = first.area;
  const double lower_length = std::sqrt(4.0 * kPi * a0);
  const double upper_area = l0 * l0 / (4.0 * kPi);
  const double floor = 1e2 * DBL_EPSILON * l0 * l0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    b.length_bounds = b.length_bounds && r.length >= lower_length * (1.0 - tol) &&
                      r.length <= l0 * (1.0 + tol);
    b.area_bounds = b.area_bounds && r.area >= a0 * (1.0 - tol) && r.area <= upper_area * (1.0 + tol);
    if (i > 0) {
      const auto& prev = records[i - 1];
      b.iso_ratio_monotone = b.iso_ratio_monotone && r.iso_ratio <= prev.iso_ratio + tol;
      if (prev.iso_difference > floor) {
        b.iso_ratio_strict = b.iso_ratio_strict && r.iso_ratio < prev.iso_ratio;
      }
    }
  }
  return b;
}

MonotonicityCheck check_monotonicity(std::span<const DiagnosticsRecord> records,
                                     double relative_slack) {
  MonotonicityCheck m;
  if (records.empty()) return m;
  const double l0 = records.front().length;
  const double a0 = records.front().area;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto& prev = records[i - 1];
    const double dl = (r.length - prev.length) / l0;
    const double da = (prev.area - r.area) / a0;
    m.worst_length_increase = std::max(m.worst_length_increase, dl);
    m.worst_area_decrease = std::max(m.worst_area_decrease, da);
    m.length_nonincreasing = m.length_nonincreasing && dl <= relative_slack;
    m.area_nondecreasing = m.area_nondecreasing && da <= relative_slack;
    m.iso_ratio_nonincreasing =
        m.iso_ratio_nonincreasing && r.iso_ratio <= prev.iso_ratio + relative_slack;
    m.iso_difference_nonincreasing =
        m.iso_difference_nonincreasing &&
        r.iso_difference <= prev.iso_difference + relative_slack * l0 * l0;
  }
  return m;
}

RateCheck check_rate_formulas(std::span<const DiagnosticsRecord> records, std::size_t index) {
  if (index == 0 || index + 1 >= records.size()) {
    throw Error(ErrorKind::InsufficientData, "rate check needs an interior sample");
  }
  const auto& r = records[index];
  const auto& a = records[index - 1];
  const auto& b = records[index + 1];
  RateCheck c;
  c.dLdt_formula = r.dLdt_formula;
  c.dAdt_formula = r.dAdt_formula;
  c.dLdt_fd = (b.length - a.length) / (b.t - a.t);
  c.dAdt_fd = (b.area - a.area) / (b.t - a.t);
  c.signs_ok = rate_signs_ok(records.subspan(index, 1));
  return c;
}

bool rate_signs_ok(std::span<const DiagnosticsRecord> records) {
  for (const auto& r : records) {
    const double tol_l = 1e-10 * r.moment_n;
    const double tol_a = 1e-10 * r.length * r.lambda;
    if (r.dLdt_formula > tol_l || r.dAdt_formula < -tol_a) return false;
  }
  return true;
}

LimitCircle limit_circle(const RunResult& run, const FlowConfig& config, const AngularGrid& grid) {
  if (run.final.status != StepStatus::Converged) {
    throw Error(ErrorKind::NotConverged,
                "limit circle needs a converged run, final status is " +
                    std::string(to_string(run.final.status)));
  }
  const FlowState& s = run.final.state;
  const RadiusProfile profile(grid, radius_from_nu(s.nu, config.n));
  LimitCircle c;
  c.radius = length(profile) / (2.0 * kPi);
  const CurvePoints curve = reconstruct_with_steiner(profile, s.center);
  c.center = steiner_point(curve);
  for (const Vec2& p : curve.points) {
    c.max_deviation = std::max(c.max_deviation, std::abs(norm(p - c.center) - c.radius));
  }
  return c;
}

bool RunDiagnostics::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

RunDiagnostics diagnose(const RunResult& run, const FlowConfig& config, const AngularGrid& grid) {
  RunDiagnostics d;
  d.records = make_records(run.samples, config, grid);
  const auto& recs = d.records;
  const bool converged = run.final.status == StepStatus::Converged;
  auto add = [&](std::string name, bool pass, std::string detail) {
    d.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };

  d.monotonicity = check_monotonicity(recs);
  add("length_nonincreasing", d.monotonicity.length_nonincreasing,
      "worst relative increase " + fmt(d.monotonicity.worst_length_increase));
  add("area_nondecreasing", d.monotonicity.area_nondecreasing,
      "worst relative decrease " + fmt(d.monotonicity.worst_area_decrease));
  add("iso_difference_nonincreasing", d.monotonicity.iso_difference_nonincreasing, "");

  d.bounds = check_bounds(recs);
  add("length_area_bounds", d.bounds.length_bounds && d.bounds.area_bounds, "");
  add("iso_ratio_decreasing", d.bounds.iso_ratio_monotone,
      d.bounds.iso_ratio_strict ? "strict above noise floor" : "not strict");

  bool lt = true, ho = true, lam = true, closed = true;
  for (const auto& r : recs) {
    lt = lt && lin_tsai_holds(r.lin_tsai_slack, r.moment_n);
    ho = ho && hoelder_holds(r.hoelder_slack, r.length);
    lam = lam && r.lambda > 0.0;
    closed = closed && r.closure_defect <= kClosureTolerance * r.length;
  }
  add("lin_tsai", lt, "");
  add("hoelder", ho, "");
  add("lambda_positive", lam, "");
  add("closure", closed, "");
  add("rate_formula_signs", rate_signs_ok(recs), "");

  d.phi = check_phi_principle(recs);
  add("phi_principle", d.phi.pass, "worst margin " + fmt(d.phi.worst_margin));

  try {
    d.iso_decay = fit_decay(recs, config.n);
    add("iso_difference_decay", d.iso_decay.pass,
        d.iso_decay.vacuous ? "vacuous"
                            : "measured " + fmt(d.iso_decay.measured_rate) + " theoretical " +
                                  fmt(d.iso_decay.theoretical_rate));
  } catch (const Error& e) {
    d.iso_decay.theoretical_rate =
        theoretical_decay_rate(recs.front().length, recs.front().area, config.n);
    add("iso_difference_decay", !converged, std::string("skipped: ") + e.what());
  }

  if (converged) {
    try {
      d.energy_decay = grad_energy_decay(recs);
      add("grad_energy_decay", d.energy_decay.pass,
          d.energy_decay.vacuous ? "vacuous" : "slope " + fmt(-d.energy_decay.measured_rate));
    } catch (const Error& e) {
      add("grad_energy_decay", false, e.what());
    }
    d.limit = limit_circle(run, config, grid);
    d.has_limit = true;
    const double bound = 10.0 * std::pow(config.eps_converged, 1.0 / config.n) * d.limit.radius;
    add("limit_circle", d.limit.max_deviation <= bound,
        "max deviation " + fmt(d.limit.max_deviation));
  }
  return d;
}

}  // namespace ncflow
