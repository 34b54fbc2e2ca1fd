#include "ncflow/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <optional>

#include "ncflow/diagnostics.hpp"
#include "ncflow/error.hpp"

namespace ncflow {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample_fourier(const family::Fourier& f, const AngularGrid& grid) {
  std::vector<double> rho(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double th = grid.node(i);
    double v = 0.0;
    for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) v += f.cos_coeffs[k] * std::cos(k * th);
    for (std::size_t k = 1; k < f.sin_coeffs.size(); ++k) v += f.sin_coeffs[k] * std::sin(k * th);
    rho[static_cast<std::size_t>(i)] = v;
  }
  return rho;
}

}  // namespace

family::Fourier random_convex_fourier(std::mt19937_64& rng, const AngularGrid& grid,
                                      double amplitude, int max_mode) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 1.0);
  const auto size = static_cast<std::size_t>(max_mode + 1);
  for (;;) {
    family::Fourier f{std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)};
    f.cos_coeffs[0] = 1.0;
    const double s = amplitude * scale(rng);
    for (int k = 2; k <= max_mode; ++k) {
      f.cos_coeffs[static_cast<std::size_t>(k)] = s * unit(rng) / (k - 1);
      f.sin_coeffs[static_cast<std::size_t>(k)] = s * unit(rng) / (k - 1);
    }
    const auto rho = sample_fourier(f, grid);
    if (*std::min_element(rho.begin(), rho.end()) > 0.05) return f;
  }
}

std::string serialize(const family::Fourier& f) {
  nlohmann::json j;
  j["fourier_cos"] = f.cos_coeffs;
  j["fourier_sin"] = f.sin_coeffs;
  return j.dump();
}

family::Fourier parse_fourier(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return {j.at("fourier_cos").get<std::vector<double>>(),
            j.at("fourier_sin").get<std::vector<double>>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("fourier profile: ") + e.what());
  }
}

void check_profile(const family::Fourier& f, std::span<const double> n_set,
                   const AngularGrid& grid, FuzzReport& report) {
  std::optional<RadiusProfile> profile;
  try {
    profile.emplace(initial_profile(f, grid));
  } catch (const Error&) {
    ++report.invalid_input;
    return;
  }
  ++report.checked;
  const double len = length(*profile);
  const double area = ncflow::area(reconstruct_curve(*profile, {}));
  auto record = [&](const char* name, double n, double slack, double scale, double& worst) {
    const double rel = slack / scale;
    worst = std::min(worst, rel);
    report.max_abs_slack = std::max(report.max_abs_slack, std::abs(rel));
    if (rel < -kSlackTolerance) report.violations.push_back({name, n, slack, serialize(f)});
  };
  const double iso = len * len - 4.0 * kPi * area;
  record("isoperimetric", 0.0, iso, len * len, report.worst_isoperimetric);
  for (double n : n_set) {
    record("lin_tsai", n, check_lin_tsai(*profile, n, len, area), moment(*profile, n),
           report.worst_lin_tsai);
    record("hoelder", n, check_hoelder(*profile, n), len, report.worst_hoelder);
  }
}

FuzzReport fuzz_inequalities(const FuzzOptions& options) {
  if (options.count < 1) throw Error(ErrorKind::ValidationError, "fuzz count must be >= 1");
  for (double n : options.n_set) {
    if (!(n >= 1.0)) throw Error(ErrorKind::ValidationError, "fuzz exponents must satisfy n >= 1");
  }
  const AngularGrid grid = AngularGrid::build(options.grid_size);
  std::mt19937_64 rng(options.seed);
  FuzzReport report;
  for (std::size_t i = 0; i < options.count; ++i) {
    const family::Fourier f = options.force_circle ? family::Fourier{{1.0}, {}}
                                                   : random_convex_fourier(rng, grid);
    check_profile(f, options.n_set, grid, report);
  }
  return report;
}

std::string report_json(const FuzzOptions& options, const FuzzReport& report) {
  nlohmann::ordered_json j;
  j["count"] = options.count;
  j["seed"] = options.seed;
  j["n_set"] = options.n_set;
  j["grid_size"] = options.grid_size;
  j["checked"] = report.checked;
  j["invalid_input"] = report.invalid_input;
  j["worst_relative_slack"] = {{"lin_tsai", report.worst_lin_tsai},
                               {"hoelder", report.worst_hoelder},
                               {"isoperimetric", report.worst_isoperimetric}};
  auto& v = j["violations"] = nlohmann::ordered_json::array();
  for (const auto& x : report.violations) {
    v.push_back({{"inequality", x.inequality},
                 {"n", x.n},
                 {"slack", x.slack},
                 {"profile", nlohmann::ordered_json::parse(x.profile)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace ncflow
