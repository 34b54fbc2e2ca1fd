#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncflow/error.hpp"
#include "ncflow/flow.hpp"

using namespace ncflow;
using std::numbers::pi;

namespace {

FlowConfig make_config(FlowVariant v, double n, int grid) {
  FlowConfig c;
  c.variant = v;
  c.n = n;
  c.grid_size = grid;
  return c;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("validation names the violated constraint") {
  FlowConfig c;
  c.n = 0.5;
  try {
    c.validate();
    FAIL("n < 1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("n >= 1") != std::string::npos);
  }
  c = FlowConfig{};
  c.cfl_safety = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = FlowConfig{};
  c.sample_dt = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_NOTHROW(FlowConfig{}.validate());
}

TEST_CASE("nonlocal term on circles") {
  const auto g = AngularGrid::build(256);
  auto c = make_config(FlowVariant::Flow1, 1.0, 256);
  CHECK(lambda_nonlocal(std::vector<double>(256, 1.0), c, g) == doctest::Approx(1.0).epsilon(1e-14));
  c = make_config(FlowVariant::Flow2, 2.0, 256);
  CHECK(lambda_nonlocal(std::vector<double>(256, 4.0), c, g) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("nonlocal term on the ellipse agrees with a refined grid") {
  for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
    double lam[2];
    int idx = 0;
    for (int n : {512, 4096}) {
      const auto g = AngularGrid::build(n);
      FlowSolver s(make_config(v, 1.0, n), g);
      lam[idx++] = s.initial_state(initial_profile(family::Ellipse{2.0, 1.0}, g)).lambda;
    }
    CHECK(std::abs(lam[0] - lam[1]) < 1e-8);
  }
}

TEST_CASE("right-hand side") {
  const auto g = AngularGrid::build(512);
  std::vector<double> c(512, 2.5);
  for (double n : {1.0, 2.0, 3.0}) {
    for (double v : rhs(c, 2.5, n, g)) CHECK(std::abs(v) < 1e-13);
  }
  for (double v : rhs(std::vector<double>(512, 1.0), 0.0, 1.0, g)) CHECK(v == doctest::Approx(1.0));

  std::vector<double> nu(512);
  for (int i = 0; i < 512; ++i) nu[i] = 1.0 + 0.1 * std::cos(2 * g.node(i));
  const double h = g.spacing();
  CHECK(std::abs(rhs(nu, 1.0, 1.0, g)[0] - (-0.3)) < 0.1 * h * h);
}

TEST_CASE("stable time step") {
  auto c = make_config(FlowVariant::Flow1, 1.0, 512);
  const double h = 2 * pi / 512;
  CHECK(stable_dt(std::vector<double>(512, 1.0), c) == doctest::Approx(0.25 * h * h / 2).epsilon(1e-14));
  CHECK(stable_dt(std::vector<double>(512, 1.0), c) == doctest::Approx(1.8824e-5).epsilon(1e-4));
  CHECK(stable_dt(std::vector<double>(512, 9.0), c) == stable_dt(std::vector<double>(512, 1.0), c));
  c.n = 2.0;
  CHECK(stable_dt(std::vector<double>(512, 4.0), c) == doctest::Approx(0.25 * h * h / 8).epsilon(1e-14));
}

TEST_CASE("one step: circle fixed point and ellipse monotonicity") {
  const auto g = AngularGrid::build(256);
  FlowSolver circle(make_config(FlowVariant::Flow1, 1.0, 256), g);
  const auto s0 = circle.initial_state(initial_profile(family::Circle{1.0}, g));
  const auto out = circle.step(s0);
  for (double v : out.state.nu) CHECK(std::abs(v - 1.0) <= 1e-12);

  for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
    FlowSolver solver(make_config(v, 1.0, 256), g);
    const auto e0 = solver.initial_state(initial_profile(family::Ellipse{2.0, 1.0}, g));
    const auto e1 = solver.step(e0);
    CHECK(e1.status == StepStatus::Running);
    CHECK(e1.state.length < e0.length);
    CHECK(e1.state.area > e0.area);
  }
}

TEST_CASE("blow-up guard") {
  const auto g = AngularGrid::build(128);
  FlowSolver solver(make_config(FlowVariant::Flow1, 1.0, 128), g);
  const auto s0 = solver.initial_state(initial_profile(family::Cosine{1.0, 1.0 - 5e-9, 2}, g));
  const auto out = solver.step(s0);
  CHECK(out.status == StepStatus::BlowUp);
  CHECK(out.state.t == s0.t);
}

TEST_CASE("circle converges immediately for every exponent and variant") {
  const auto g = AngularGrid::build(128);
  for (auto v : {FlowVariant::Flow1, FlowVariant::Flow2}) {
    for (double n : {1.0, 2.0, 3.0}) {
      auto c = make_config(v, n, 128);
      FlowSolver solver(c, g);
      const auto run = solver.run(initial_profile(family::Circle{1.0}, g));
      CHECK(run.final.status == StepStatus::Converged);
      CHECK(run.steps == 1);
      for (const auto& s : run.samples) {
        for (double r : radius_from_nu(s.nu, n)) CHECK(std::abs(r - 1.0) <= 1e-6);
      }
    }
  }
}

TEST_CASE("cosine profile under Flow2, n = 2: monotone length and area") {
  const auto g = AngularGrid::build(128);
  auto c = make_config(FlowVariant::Flow2, 2.0, 128);
  c.t_end = 0.5;
  c.sample_dt = 0.02;
  FlowSolver solver(c, g);
  const auto run = solver.run(initial_profile(family::Cosine{1.0, 0.3, 3}, g));
  REQUIRE(run.samples.size() > 10);
  for (std::size_t i = 1; i < run.samples.size(); ++i) {
    CHECK(run.samples[i].length <= run.samples[i - 1].length * (1 + 1e-12));
    CHECK(run.samples[i].area >= run.samples[i - 1].area * (1 - 1e-12));
  }
}

TEST_CASE("samples land on the sampling grid and closure is conserved") {
  const auto g = AngularGrid::build(128);
  auto c = make_config(FlowVariant::Flow1, 1.5, 128);
  c.t_end = 0.3;
  c.sample_dt = 0.05;
  FlowSolver solver(c, g);
  const auto run = solver.run(initial_profile(family::Ellipse{1.5, 1.0}, g));
  REQUIRE(run.samples.size() == 7);
  for (std::size_t k = 0; k < run.samples.size(); ++k) {
    CHECK(run.samples[k].t == doctest::Approx(0.05 * k).epsilon(1e-14));
    const auto rho = radius_from_nu(run.samples[k].nu, c.n);
    CHECK(norm(closure_defect(g, rho)) < 1e-12 * run.samples[k].length);
  }
  CHECK(run.final.status == StepStatus::Running);
}

TEST_CASE("property: equilibrium error is zero exactly on constant profiles") {
  std::vector<double> nu(64, std::pow(1.3, 2.0));
  CHECK(equilibrium_error(nu, 2 * pi * 1.3, 2.0) < 1e-14);
  nu[5] += 1e-3;
  CHECK(equilibrium_error(nu, 2 * pi * 1.3, 2.0) == doctest::Approx(1e-3).epsilon(1e-9));
}

}
