#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "ncflow/diagnostics.hpp"
#include "ncflow/error.hpp"

using namespace ncflow;
using std::numbers::pi;

namespace {

FlowConfig make_config(FlowVariant v, double n, int grid, double t_end, double sample_dt = 0.01) {
  FlowConfig c;
  c.variant = v;
  c.n = n;
  c.grid_size = grid;
  c.t_end = t_end;
  c.sample_dt = sample_dt;
  return c;
}

struct Trajectory {
  FlowConfig config;
  AngularGrid grid;
  RunResult run;
  std::vector<DiagnosticsRecord> records;
};

Trajectory evolve(const FlowConfig& c, const ProfileFamily& f, Vec2 center = {}) {
  const auto g = AngularGrid::build(c.grid_size);
  FlowSolver s(c, g);
  auto run = s.run(s.initial_state(initial_profile(f, g), center));
  auto recs = make_records(run.samples, c, g);
  return {c, g, std::move(run), std::move(recs)};
}

std::vector<DiagnosticsRecord> synthetic_decay(double rate, std::size_t count) {
  std::vector<DiagnosticsRecord> r(count);
  for (std::size_t i = 0; i < count; ++i) {
    r[i].t = 0.1 * i;
    r[i].length = 2 * pi;
    r[i].area = pi;
    r[i].iso_difference = 3.0 * std::exp(-rate * r[i].t);
  }
  return r;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("Lin-Tsai slack") {
  const auto g = AngularGrid::build(256);
  for (double r : {0.5, 1.0, 2.0}) {
    const auto p = initial_profile(family::Circle{r}, g);
    for (double n : {1.0, 1.5, 2.0, 3.0}) {
      CHECK(std::abs(check_lin_tsai(p, n, length(p), enclosed_area(p))) < 1e-12 * moment(p, n));
    }
  }
  double slack[2];
  int idx = 0;
  for (int n : {256, 4096}) {
    const auto gg = AngularGrid::build(n);
    const auto p = initial_profile(family::Ellipse{2.0, 1.0}, gg);
    slack[idx++] = check_lin_tsai(p, 1.0, length(p), enclosed_area(p));
  }
  CHECK(slack[0] > 0.0);
  CHECK(std::abs(slack[0] - slack[1]) < 1e-8);
}

TEST_CASE("Hoelder slack") {
  const auto g = AngularGrid::build(256);
  CHECK(std::abs(check_hoelder(initial_profile(family::Circle{1.0}, g), 1.0)) < 1e-13);
  const auto p = initial_profile(family::Cosine{1.0, 0.3, 2}, g);
  // (∮ρ²)^{1/2}(2π)^{1/2} − 2π with ∮ρ² = 2π(1 + 0.045).
  const double oracle = std::sqrt(2 * pi * 1.045) * std::sqrt(2 * pi) - 2 * pi;
  CHECK(check_hoelder(p, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(check_hoelder(p, 1.0) > 0.0);
  CHECK(std::abs(check_hoelder(p, 0.0)) < 1e-13);
}

TEST_CASE("theoretical decay rate") {
  CHECK(theoretical_decay_rate(2 * pi, pi, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  const double a0 = 3.7;
  CHECK(theoretical_decay_rate(std::sqrt(4 * pi * a0), a0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  auto speed = [](double t) { return std::hypot(2 * std::sin(t), std::cos(t)); };
  const double l0 =
      4 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(speed, 0.0, pi / 2, 15, 1e-15);
  const double rate = theoretical_decay_rate(l0, 2 * pi, 1.0);
  CHECK(std::abs(rate - 1.83429) < 2e-5);
  CHECK(rate == doctest::Approx(2 * std::sqrt(8 * pi * pi) / l0).epsilon(1e-14));
}

TEST_CASE("decay fit") {
  const auto fit = fit_decay(synthetic_decay(2.5, 40), 1.0);
  CHECK(fit.measured_rate == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.samples_used == 40);
  CHECK(fit.pass);  // theoretical rate 2 for this circle-like normalisation
  CHECK_FALSE(fit_decay(synthetic_decay(1.9, 40), 1.0).pass);
  CHECK_THROWS_AS(fit_decay(synthetic_decay(2.5, 8), 1.0), Error);

  auto circle = synthetic_decay(0.0, 20);
  for (auto& r : circle) r.iso_difference = 0.0;
  const auto vac = fit_decay(circle, 1.0);
  CHECK(vac.vacuous);
  CHECK(vac.pass);
}

TEST_CASE("decay fit on solver runs") {
  const auto e = evolve(make_config(FlowVariant::Flow1, 1.0, 256, 2.0), family::Ellipse{2.0, 1.0});
  const auto fe = fit_decay(e.records, 1.0);
  CHECK(fe.theoretical_rate == doctest::Approx(1.83430).epsilon(1e-5));
  CHECK(fe.measured_rate >= 0.98 * fe.theoretical_rate);

  const auto c = evolve(make_config(FlowVariant::Flow2, 1.0, 128, 2.0), family::Cosine{1.0, 0.2, 2});
  const auto fc = fit_decay(c.records, 1.0);
  CHECK(fc.pass);
  CHECK(fc.measured_rate >= fc.theoretical_rate);
}

TEST_CASE("Phi principle detector") {
  const auto e = evolve(make_config(FlowVariant::Flow1, 1.0, 128, 0.5), family::Ellipse{2.0, 1.0});
  const auto ok = check_phi_principle(e.records);
  CHECK(ok.pass);
  CHECK(ok.worst_margin >= -1e-8);

  auto bad = e.records;
  bad[bad.size() / 2].phi_max = 10.0 * (bad.front().phi_max + bad.front().nu_max * bad.front().nu_max);
  CHECK_FALSE(check_phi_principle(bad).pass);

  const auto c = evolve(make_config(FlowVariant::Flow2, 2.0, 64, 0.1), family::Circle{1.5});
  const auto eq = check_phi_principle(c.records);
  CHECK(eq.pass);
  CHECK(std::abs(eq.worst_margin) < 1e-12);
}

TEST_CASE("length and area bounds") {
  const auto e = evolve(make_config(FlowVariant::Flow1, 1.0, 128, 1.0), family::Ellipse{2.0, 1.0});
  const auto b = check_bounds(e.records);
  CHECK(b.pass());
  CHECK(b.iso_ratio_strict);
  for (const auto& r : e.records) {
    CHECK(r.length >= 8.8857);
    CHECK(r.length <= 9.68845);
  }
  const auto c = evolve(make_config(FlowVariant::Flow1, 1.0, 64, 0.1), family::Circle{1.0});
  CHECK(check_bounds(c.records).pass());

  auto bad = e.records;
  bad[3].length = bad[0].length * 1.01;
  CHECK_FALSE(check_bounds(bad).length_bounds);
}

TEST_CASE("rate formulas") {
  const auto c = evolve(make_config(FlowVariant::Flow1, 1.0, 64, 0.1, 0.01), family::Circle{1.0});
  for (const auto& r : c.records) {
    CHECK(std::abs(r.dLdt_formula) < 1e-12);
    CHECK(std::abs(r.dAdt_formula) < 1e-12);
  }
  auto cfg = make_config(FlowVariant::Flow2, 1.0, 128, 0.3, 0.01);
  cfg.eps_converged = 0.0;
  const auto e = evolve(cfg, family::Ellipse{2.0, 1.0});
  CHECK(rate_signs_ok(e.records));
  const auto rc = check_rate_formulas(e.records, 10);
  CHECK(rc.signs_ok);
  CHECK(rc.dLdt_formula < 0.0);
  CHECK(rc.dAdt_formula > 0.0);
  CHECK(std::abs(rc.dLdt_formula - rc.dLdt_fd) < 1e-2 * std::abs(rc.dLdt_formula));
  CHECK(std::abs(rc.dAdt_formula - rc.dAdt_fd) < 1e-2 * std::abs(rc.dAdt_formula));
  CHECK_THROWS_AS(check_rate_formulas(e.records, 0), Error);
}

TEST_CASE("printed and general length rates coincide for Flow1") {
  const auto e = evolve(make_config(FlowVariant::Flow1, 2.0, 128, 0.05), family::Ellipse{2.0, 1.0});
  for (const auto& r : e.records) {
    CHECK(r.dLdt_printed == doctest::Approx(r.dLdt_formula).epsilon(1e-10));
  }
}

TEST_CASE("limit circle") {
  const auto c = evolve(make_config(FlowVariant::Flow1, 1.0, 128, 10.0), family::Circle{1.0});
  const auto lc = limit_circle(c.run, c.config, c.grid);
  CHECK(lc.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm(lc.center) < 1e-8);
  CHECK(lc.max_deviation < 1e-10);

  const auto t = evolve(make_config(FlowVariant::Flow2, 2.0, 128, 10.0), family::Circle{1.0}, {1.0, 2.0});
  const auto lt = limit_circle(t.run, t.config, t.grid);
  CHECK(lt.center.x == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lt.center.y == doctest::Approx(2.0).epsilon(1e-10));

  const auto e = evolve(make_config(FlowVariant::Flow1, 1.0, 64, 0.05), family::Ellipse{2.0, 1.0});
  try {
    limit_circle(e.run, e.config, e.grid);
    FAIL("non-converged run accepted");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotConverged);
  }
}

TEST_CASE("gradient energy decay") {
  const auto c = evolve(make_config(FlowVariant::Flow1, 1.0, 64, 1.0), family::Circle{2.0});
  CHECK(grad_energy_decay(c.records).vacuous);
  auto cfg = make_config(FlowVariant::Flow1, 3.0, 128, 2.0, 0.01);
  cfg.eps_converged = 0.0;
  const auto k = evolve(cfg, family::Cosine{1.0, 0.3, 2});
  const auto fit = grad_energy_decay(k.records);
  CHECK(fit.pass);
  CHECK(fit.measured_rate > 0.0);
  CHECK(fit.r_squared >= 0.99);
}

TEST_CASE("diagnose an ellipse run end to end") {
  const auto g = AngularGrid::build(128);
  auto cfg = make_config(FlowVariant::Flow1, 1.0, 128, 10.0);
  FlowSolver s(cfg, g);
  const auto run = s.run(initial_profile(family::Ellipse{2.0, 1.0}, g));
  REQUIRE(run.final.status == StepStatus::Converged);
  const auto d = diagnose(run, cfg, g);
  for (const auto& v : d.verdicts) CHECK_MESSAGE(v.pass, v.name << ": " << v.detail);
  CHECK(d.has_limit);
  CHECK(d.limit.radius >= std::sqrt(4 * pi * 2 * pi) / (2 * pi) - 1e-9);
  CHECK(d.limit.radius <= 9.6884482 / (2 * pi));
  const auto& last = d.records.back();
  CHECK(last.e_inf <= cfg.eps_converged);
  CHECK(last.lambda == doctest::Approx(std::pow(last.length / (2 * pi), 1.0)).epsilon(1e-9));
  CHECK(last.kappa_min * last.kappa_max == doctest::Approx(std::pow(2 * pi / last.length, 2)).epsilon(1e-8));
}

}
