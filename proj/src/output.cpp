#include "ncflow/output.hpp"

#include <fstream>
#include <numbers>

#include "ncflow/error.hpp"
#include "ncflow/numfmt.hpp"

namespace ncflow {

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

void row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    first = false;
    append_number(out, v);
  }
  out += '\n';
}

}  // namespace

std::string timeseries_csv(std::span<const DiagnosticsRecord> records) {
  std::string out =
      "t,L,A,lambda,Q,iso_ratio,kappa_min,kappa_max,e_inf,grad_energy,phi_max,closure_defect,"
      "lin_tsai_slack,hoelder_slack,dLdt_formula,dAdt_formula,dLdt_eq25\n";
  for (const auto& r : records) {
    row(out, {r.t, r.length, r.area, r.lambda, r.iso_difference, r.iso_ratio, r.kappa_min,
              r.kappa_max, r.e_inf, r.grad_energy, r.phi_max, r.closure_defect, r.lin_tsai_slack,
              r.hoelder_slack, r.dLdt_formula, r.dAdt_formula, r.dLdt_printed});
  }
  return out;
}

std::string snapshot_csv(const FlowState& state, const FlowConfig& config, const AngularGrid& grid) {
  const RadiusProfile profile(grid, radius_from_nu(state.nu, config.n));
  const CurvePoints curve = reconstruct_with_steiner(profile, state.center);
  std::string out = "theta,rho,nu,x,y\n";
  for (int i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    row(out, {grid.node(i), profile[i], state.nu[k], curve.points[k].x, curve.points[k].y});
  }
  return out;
}

namespace {

nlohmann::ordered_json fit_json(const DecayFit& f) {
  return {{"t_begin", f.t_begin},         {"t_end", f.t_end},
          {"measured_rate", f.measured_rate}, {"theoretical_rate", f.theoretical_rate},
          {"r_squared", f.r_squared},     {"samples_used", f.samples_used},
          {"vacuous", f.vacuous},         {"pass", f.pass}};
}

}  // namespace

std::string summary_json(const RunManifest& manifest, const RunReport& report,
                         const RunResult* run, const RunDiagnostics* diagnostics,
                         const AngularGrid* grid) {
  nlohmann::ordered_json j;
  j["format_version"] = manifest.format_version;
  j["status"] = report.status;
  j["exit_code"] = report.exit_code;
  if (!report.message.empty()) j["message"] = report.message;
  if (run != nullptr && grid != nullptr) {
    j["steps"] = run->steps;
    j["samples"] = run->samples.size();
    const FlowState& s = run->final.state;
    nlohmann::ordered_json fin;
    fin["t"] = s.t;
    try {
      const GeometricSummary g = summarize(RadiusProfile(*grid, radius_from_nu(s.nu, manifest.config.n)));
      fin["length"] = g.length;
      fin["area"] = g.area;
      fin["iso_difference"] = g.iso_difference;
      fin["iso_ratio"] = g.iso_ratio;
      fin["kappa_min"] = g.kappa_min;
      fin["kappa_max"] = g.kappa_max;
    } catch (const Error& e) {
      fin["error"] = e.what();
    }
    fin["lambda"] = s.lambda;
    fin["e_inf"] = equilibrium_error(s.nu, s.length, manifest.config.n);
    j["final"] = fin;
  }
  if (diagnostics != nullptr) {
    if (diagnostics->has_limit) {
      const auto& c = diagnostics->limit;
      j["limit_circle"] = {{"radius", c.radius},
                           {"center", {c.center.x, c.center.y}},
                           {"max_deviation", c.max_deviation}};
    } else {
      j["limit_circle"] = nullptr;
    }
    j["iso_difference_decay"] = fit_json(diagnostics->iso_decay);
    j["grad_energy_decay"] = fit_json(diagnostics->energy_decay);
    auto& v = j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& x : diagnostics->verdicts) {
      v.push_back({{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
    }
  }
  j["config"] = manifest_echo(manifest);
  return j.dump(2) + "\n";
}

}  // namespace ncflow
