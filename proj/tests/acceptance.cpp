// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncflow/commands.hpp"
#include "ncflow/diagnostics.hpp"
#include "ncflow/error.hpp"
#include "ncflow/fuzz.hpp"
#include "ncflow/numfmt.hpp"
#include "ncflow/oracle.hpp"

using namespace ncflow;
using std::numbers::pi;

namespace {

constexpr double kEllipseLength = 9.6884482;
constexpr double kEllipseArea = 2 * pi;
constexpr double kEllipseRate = 1.83429;

struct Result {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

FlowConfig make_config(FlowVariant v, double n, int grid, double t_end, double sample_dt = 0.01) {
  FlowConfig c;
  c.variant = v;
  c.n = n;
  c.grid_size = grid;
  c.t_end = t_end;
  c.sample_dt = sample_dt;
  return c;
}

const char* name(FlowVariant v) { return v == FlowVariant::Flow1 ? "flow1" : "flow2"; }

struct Trajectory {
  FlowConfig config;
  AngularGrid grid;
  RunResult run;
};

Trajectory evolve(const FlowConfig& c, const ProfileFamily& f) {
  const auto g = AngularGrid::build(c.grid_size);
  FlowSolver solver(c, g);
  return {c, g, solver.run(initial_profile(f, g))};
}

// Converged runs collected along the way for the maximum-principle criterion.
std::vector<Trajectory> g_converged;

Result circle_equilibrium() {
  Result r;
  double worst_rho = 0.0, worst_lambda = 0.0;
  std::size_t cases = 0;
  for (double radius : {0.5, 1.0, 2.0}) {
    for (double n : {1.0, 2.0, 3.0}) {
      for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
        const auto c = make_config(v, n, 256, 10.0);
        const auto g = AngularGrid::build(256);
        FlowSolver solver(c, g);
        const auto initial = initial_profile(family::Circle{radius}, g);
        auto run = solver.run(initial);
        // Keep stepping well past the convergence test to expose any drift.
        std::vector<FlowState> states = run.samples;
        FlowState s = run.final.state;
        for (int k = 0; k < 2000; ++k) {
          const auto out = solver.step(s);
          if (out.status == StepStatus::BlowUp || out.status == StepStatus::NumericalFailure) {
            r.pass = false;
            r.detail += " step failure;";
            break;
          }
          s = out.state;
        }
        states.push_back(s);
        for (const auto& st : states) {
          for (double rho : radius_from_nu(st.nu, n)) worst_rho = std::max(worst_rho, std::abs(rho - radius));
          worst_lambda = std::max(worst_lambda, std::abs(st.lambda - std::pow(radius, n)));
        }
        r.pass = r.pass && run.final.status == StepStatus::Converged;
        if (run.final.status == StepStatus::Converged) g_converged.push_back({c, g, std::move(run)});
        ++cases;
      }
    }
  }
  r.pass = r.pass && worst_rho <= 1e-6 && worst_lambda <= 1e-8;
  r.detail = std::to_string(cases) + " cases, max|rho-r| " + num(worst_rho) + ", max|lambda-r^n| " +
             num(worst_lambda) + r.detail;
  return r;
}

Result monotonicity() {
  Result r;
  const auto grid = AngularGrid::build(256);
  std::mt19937_64 rng(2024);
  std::vector<family::Fourier> profiles;
  for (int i = 0; i < 20; ++i) profiles.push_back(random_convex_fourier(rng, grid));
  double worst_l = 0.0, worst_a = 0.0;
  int failures = 0, runs = 0;
  for (const auto& f : profiles) {
    for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
      for (double n : {1.0, 2.0}) {
        auto c = make_config(v, n, 256, 0.5);
        const auto t = evolve(c, f);
        const auto recs = make_records(t.run.samples, c, t.grid);
        const auto m = check_monotonicity(recs, 1e-10);
        worst_l = std::max(worst_l, m.worst_length_increase);
        worst_a = std::max(worst_a, m.worst_area_decrease);
        const bool ok = m.length_nonincreasing && m.area_nondecreasing &&
                        m.iso_ratio_nonincreasing && recs.size() > 10 &&
                        t.run.final.status != StepStatus::BlowUp &&
                        t.run.final.status != StepStatus::NumericalFailure;
        failures += ok ? 0 : 1;
        ++runs;
      }
    }
  }
  r.pass = failures == 0;
  r.detail = std::to_string(runs) + " runs, " + std::to_string(failures) +
             " failing; worst relative L increase " + num(worst_l) + ", A decrease " + num(worst_a);
  return r;
}

Result decay_rate() {
  Result r;
  const double oracle_rate = theoretical_decay_rate(kEllipseLength, kEllipseArea, 1.0);
  struct Case {
    FlowVariant v;
    double n, t_end;
  };
  for (const Case& k : {Case{FlowVariant::Flow1, 1.0, 3.0}, Case{FlowVariant::Flow2, 1.0, 3.0},
                        Case{FlowVariant::Flow1, 2.0, 1.0}, Case{FlowVariant::Flow2, 2.0, 1.0}}) {
    auto c = make_config(k.v, k.n, 512, k.t_end);
    const auto t = evolve(c, family::Ellipse{2.0, 1.0});
    const auto recs = make_records(t.run.samples, c, t.grid);
    const auto fit = fit_decay(recs, k.n);
    double bound = fit.theoretical_rate;
    if (k.v == FlowVariant::Flow1 && k.n == 1.0) {
      bound = kEllipseRate;
      r.pass = r.pass && std::abs(fit.theoretical_rate - oracle_rate) < 1e-6;
    }
    const bool ok = fit.measured_rate >= 0.98 * bound;
    r.pass = r.pass && ok;
    r.detail += std::string(name(k.v)) + " n=" + num(k.n) + ": " + num(fit.measured_rate) +
                " vs " + num(bound) + "; ";
  }
  return r;
}

Result fuzzing() {
  Result r;
  FuzzOptions opt;
  opt.count = 1000;
  opt.seed = 42;
  opt.n_set = {1.0, 1.5, 2.0, 3.0};
  const auto report = fuzz_inequalities(opt);
  double circle = 0.0;
  const auto g = AngularGrid::build(256);
  for (double radius : {0.5, 1.0, 2.0}) {
    const auto p = initial_profile(family::Circle{radius}, g);
    for (double n : opt.n_set) {
      circle = std::max(circle, std::abs(check_lin_tsai(p, n, length(p), enclosed_area(p))));
      circle = std::max(circle, std::abs(check_hoelder(p, n)));
    }
  }
  r.pass = report.checked == 1000 && report.violations.empty() && circle <= 1e-12;
  r.detail = std::to_string(report.checked) + " profiles, " +
             std::to_string(report.violations.size()) + " violations, worst relative slack " +
             num(std::min(report.worst_lin_tsai, report.worst_hoelder)) + ", circle |slack| " +
             num(circle);
  return r;
}

// The a=2, b=1 ellipse under Flow1, n=1, N=512, run to convergence once and shared.
const Trajectory& ellipse_run() {
  static const Trajectory t = evolve(make_config(FlowVariant::Flow1, 1.0, 512, 10.0), family::Ellipse{2.0, 1.0});
  return t;
}

Result limit_convergence() {
  Result r;
  const Trajectory& t = ellipse_run();
  const FlowConfig& c = t.config;
  if (t.run.final.status != StepStatus::Converged) {
    return {false, "run ended with status " + std::string(to_string(t.run.final.status))};
  }
  const auto recs = make_records(t.run.samples, c, t.grid);
  const auto lc = limit_circle(t.run, c, t.grid);
  const double e_inf = recs.back().e_inf;
  const double lo = std::sqrt(4 * pi * recs.front().area) / (2 * pi);
  const double hi = recs.front().length / (2 * pi);
  const std::size_t tail = recs.size() - std::max<std::size_t>(1, recs.size() / 10);
  double drift = 0.0;
  for (std::size_t i = tail; i < recs.size(); ++i) drift = std::max(drift, norm(recs[i].center - lc.center));
  r.pass = e_inf <= 1e-10 && lc.radius >= lo && lc.radius <= hi &&
           lc.max_deviation <= 1e-5 * lc.radius && drift <= 1e-6;
  r.detail = "e_inf " + num(e_inf) + ", radius " + format_number(lc.radius) + " in [" + num(lo) +
             ", " + num(hi) + "], deviation/radius " + num(lc.max_deviation / lc.radius) +
             ", centre drift " + num(drift);
  return r;
}

Result phi_principle() {
  if (ellipse_run().run.final.status == StepStatus::Converged) g_converged.push_back(ellipse_run());
  // Two more converged runs beyond the circles and the ellipse.
  for (auto [c, f] : {std::pair{make_config(FlowVariant::Flow2, 1.0, 256, 10.0), ProfileFamily{family::Cosine{1.0, 0.3, 2}}},
                      std::pair{make_config(FlowVariant::Flow2, 2.0, 128, 10.0), ProfileFamily{family::Cosine{1.0, 0.3, 3}}}}) {
    auto t = evolve(c, f);
    if (t.run.final.status == StepStatus::Converged) g_converged.push_back(std::move(t));
  }
  Result r;
  double worst = INFINITY;
  for (const auto& t : g_converged) {
    const auto p = check_phi_principle(make_records(t.run.samples, t.config, t.grid));
    worst = std::min(worst, p.worst_margin);
    r.pass = r.pass && p.pass;
  }
  r.pass = r.pass && g_converged.size() >= 20;
  r.detail = std::to_string(g_converged.size()) + " converged runs, worst margin " + num(worst);
  return r;
}

Result oracle_equivalence() {
  const FlowConfig c = make_config(FlowVariant::Flow1, 1.0, 512, 0.1);
  const double d512 = oracle_distance(c, 2.0, 1.0, 512, 0.1);
  const double d1024 = oracle_distance(c, 2.0, 1.0, 1024, 0.1);
  return {d512 <= 1e-3 && d1024 <= 0.5 * d512,
          "N=M=512: " + num(d512) + ", N=M=1024: " + num(d1024) + ", ratio " + num(d512 / d1024)};
}

Result grid_convergence() {
  auto final_nu = [](int n, double cfl) {
    auto c = make_config(FlowVariant::Flow1, 1.0, n, 1.0, 1.0);
    c.cfl_safety = cfl;
    c.eps_converged = 0.0;
    const auto t = evolve(c, family::Ellipse{2.0, 1.0});
    if (t.run.final.state.t != 1.0) throw Error(ErrorKind::NumericalFailure, "horizon not reached");
    return t.run.final.state.nu;
  };
  const auto ref = final_nu(2048, 1.0);
  double err[2];
  int idx = 0;
  for (int n : {256, 512}) {
    const auto nu = final_nu(n, 0.25);
    const int stride = 2048 / n;
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(nu[i] - ref[static_cast<std::size_t>(i * stride)]));
    err[idx++] = e;
  }
  const double ratio = err[0] / err[1];
  return {ratio >= 3.5 && ratio <= 4.5,
          "N=256: " + num(err[0]) + ", N=512: " + num(err[1]) + ", ratio " + num(ratio)};
}

Result rate_formulas() {
  Result r;
  double err_l[2], err_a[2];
  int idx = 0;
  bool signs = true;
  for (double sdt : {0.02, 0.01}) {
    for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
      auto c = make_config(v, 1.0, 512, 0.4, sdt);
      c.eps_converged = 0.0;
      const auto t = evolve(c, family::Ellipse{2.0, 1.0});
      const auto recs = make_records(t.run.samples, c, t.grid);
      signs = signs && rate_signs_ok(recs);
      if (v != FlowVariant::Flow1) continue;
      const auto it = std::find_if(recs.begin(), recs.end(),
                                   [](const DiagnosticsRecord& x) { return std::abs(x.t - 0.2) < 1e-12; });
      if (it == recs.end()) return {false, "no sample at t = 0.2"};
      const auto rc = check_rate_formulas(recs, static_cast<std::size_t>(it - recs.begin()));
      err_l[idx] = std::abs(rc.dLdt_formula - rc.dLdt_fd);
      err_a[idx] = std::abs(rc.dAdt_formula - rc.dAdt_fd);
      ++idx;
    }
  }
  const double ratio_l = err_l[0] / err_l[1];
  const double ratio_a = err_a[0] / err_a[1];
  // The area rate is only required to converge at least at second order.
  r.pass = signs && ratio_l >= 3.5 && ratio_l <= 4.5 && ratio_a >= 3.5;
  r.detail = "|dL/dt - fd| " + num(err_l[0]) + " -> " + num(err_l[1]) + " (ratio " + num(ratio_l) +
             "), dA/dt ratio " + num(ratio_a) + ", signs " + (signs ? "ok" : "wrong");
  return r;
}

Result determinism() {
  namespace fs = std::filesystem;
  const auto m = parse_config(
      R"({"variant": "flow2", "n": 2, "family": "random", "seed": 42, "grid_size": 128, "t_end": 1.0})");
  const fs::path base = fs::temp_directory_path() / "ncflow_acceptance_determinism";
  fs::remove_all(base);
  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const int code_a = run_command(m, {base / "a", true});
  const int code_b = run_command(m, {base / "b", true});
  const std::string a = bytes(base / "a" / "timeseries.csv");
  const std::string b = bytes(base / "b" / "timeseries.csv");
  return {code_a == code_b && !a.empty() && a == b,
          std::to_string(a.size()) + " bytes, exit codes " + std::to_string(code_a) + "/" +
              std::to_string(code_b) + (a == b ? ", identical" : ", differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Result()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "circle equilibrium", circle_equilibrium},
      {2, "length/area monotonicity", monotonicity},
      {3, "exponential decay with explicit rate", decay_rate},
      {4, "Lin-Tsai and Hoelder fuzzing", fuzzing},
      {5, "Phi maximum principle", phi_principle},
      {6, "convergence to a finite circle", limit_convergence},
      {7, "marker oracle equivalence", oracle_equivalence},
      {8, "second-order grid convergence", grid_convergence},
      {9, "rate-formula consistency", rate_formulas},
      {10, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.title,
                r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
