#include "ncflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ncflow/error.hpp"
#include "ncflow/fuzz.hpp"

namespace ncflow {
namespace {

using json = nlohmann::json;

const std::set<std::string> kCommonKeys = {
    "variant",      "n",        "grid_size",     "cfl_safety",     "t_end",
    "sample_dt",    "eps_blowup", "eps_converged", "closure_projection", "family",
    "center",       "output_dir", "seed",          "format_version",  "snapshot_every"};

const std::map<std::string, std::set<std::string>> kFamilyKeys = {
    {"circle", {"r"}},
    {"ellipse", {"a", "b"}},
    {"cosine", {"r0", "eps", "m"}},
    {"fourier", {"fourier_cos", "fourier_sin"}},
    {"random", {"amplitude", "max_mode"}},
};

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

template <class T>
T field(const json& doc, const std::string& key, T fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::ParseError,
                "field '" + key + "' has the wrong type (" + it->type_name() + ")");
  }
}

double number(const json& doc, const std::string& key, double fallback) {
  const auto it = doc.find(key);
  if (it != doc.end() && !it->is_number()) {
    throw Error(ErrorKind::ParseError, "field '" + key + "' must be a number");
  }
  return field<double>(doc, key, fallback);
}

int integer(const json& doc, const std::string& key, int fallback) {
  const auto it = doc.find(key);
  if (it != doc.end() && !it->is_number_integer()) {
    throw Error(ErrorKind::ParseError, "field '" + key + "' must be an integer");
  }
  return field<int>(doc, key, fallback);
}

}  // namespace

RunManifest parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                    e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "configuration must be a JSON object");

  RunManifest m;
  m.family_name = field<std::string>(doc, "family", "circle");
  const auto fam = kFamilyKeys.find(m.family_name);
  if (fam == kFamilyKeys.end()) {
    throw Error(ErrorKind::ParseError, "field 'family': unknown family '" + m.family_name + "'");
  }
  for (const auto& [key, value] : doc.items()) {
    if (kCommonKeys.count(key) || fam->second.count(key)) continue;
    bool other_family = false;
    for (const auto& [name, keys] : kFamilyKeys) other_family = other_family || keys.count(key);
    throw Error(ErrorKind::ParseError,
                other_family ? "key '" + key + "' does not apply to family " + m.family_name
                             : "unknown key '" + key + "'");
  }

  const std::string variant = field<std::string>(doc, "variant", "flow1");
  if (variant == "flow1") {
    m.config.variant = FlowVariant::Flow1;
  } else if (variant == "flow2") {
    m.config.variant = FlowVariant::Flow2;
  } else {
    throw Error(ErrorKind::ParseError, "field 'variant' must be \"flow1\" or \"flow2\"");
  }
  FlowConfig& c = m.config;
  c.n = number(doc, "n", c.n);
  c.grid_size = integer(doc, "grid_size", c.grid_size);
  c.cfl_safety = number(doc, "cfl_safety", c.cfl_safety);
  c.t_end = number(doc, "t_end", c.t_end);
  c.sample_dt = number(doc, "sample_dt", c.sample_dt);
  c.eps_blowup = number(doc, "eps_blowup", c.eps_blowup);
  c.eps_converged = number(doc, "eps_converged", c.eps_converged);
  c.closure_projection = field<bool>(doc, "closure_projection", c.closure_projection);

  if (const auto it = doc.find("center"); it != doc.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw Error(ErrorKind::ParseError, "field 'center' must be a pair of numbers");
    }
    m.center = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  m.output_dir = field<std::string>(doc, "output_dir", m.output_dir.string());
  if (const auto it = doc.find("seed"); it != doc.end() && !it->is_number_unsigned()) {
    throw Error(ErrorKind::ParseError, "field 'seed' must be a non-negative integer");
  }
  m.seed = field<std::uint64_t>(doc, "seed", 0);
  m.snapshot_every = integer(doc, "snapshot_every", 0);
  m.format_version = field<std::string>(doc, "format_version", std::string(kFormatVersion));
  if (m.format_version != kFormatVersion) {
    throw Error(ErrorKind::ValidationError, "unsupported format_version '" + m.format_version +
                                                "', expected \"" + std::string(kFormatVersion) +
                                                "\"");
  }
  if (m.snapshot_every < 0) throw Error(ErrorKind::ValidationError, "snapshot_every must be >= 0");
  c.validate();

  if (m.family_name == "circle") {
    m.initial = family::Circle{number(doc, "r", 1.0)};
  } else if (m.family_name == "ellipse") {
    m.initial = family::Ellipse{number(doc, "a", 1.0), number(doc, "b", 1.0)};
  } else if (m.family_name == "cosine") {
    m.initial = family::Cosine{number(doc, "r0", 1.0), number(doc, "eps", 0.0), integer(doc, "m", 2)};
  } else if (m.family_name == "fourier") {
    m.initial = family::Fourier{field<std::vector<double>>(doc, "fourier_cos", {1.0}),
                                field<std::vector<double>>(doc, "fourier_sin", {})};
  } else {
    const double amplitude = number(doc, "amplitude", 0.6);
    const int max_mode = integer(doc, "max_mode", 8);
    if (max_mode < 2) throw Error(ErrorKind::ValidationError, "max_mode must be >= 2");
    if (!(amplitude >= 0.0)) throw Error(ErrorKind::ValidationError, "amplitude must be >= 0");
    std::mt19937_64 rng(m.seed);
    m.initial = random_convex_fourier(rng, AngularGrid::build(c.grid_size), amplitude, max_mode);
  }
  return m;
}

RunManifest load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read configuration " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json manifest_echo(const RunManifest& m) {
  const FlowConfig& c = m.config;
  nlohmann::ordered_json j;
  j["format_version"] = m.format_version;
  j["variant"] = std::string(to_string(c.variant));
  j["n"] = c.n;
  j["grid_size"] = c.grid_size;
  j["cfl_safety"] = c.cfl_safety;
  j["t_end"] = c.t_end;
  j["sample_dt"] = c.sample_dt;
  j["eps_blowup"] = c.eps_blowup;
  j["eps_converged"] = c.eps_converged;
  j["closure_projection"] = c.closure_projection;
  j["seed"] = m.seed;
  j["snapshot_every"] = m.snapshot_every;
  j["center"] = {m.center.x, m.center.y};
  j["family"] = m.family_name == "random" ? std::string("fourier") : m.family_name;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Circle>) {
          j["r"] = f.r;
        } else if constexpr (std::is_same_v<F, family::Ellipse>) {
          j["a"] = f.a;
          j["b"] = f.b;
        } else if constexpr (std::is_same_v<F, family::Cosine>) {
          j["r0"] = f.r0;
          j["eps"] = f.eps;
          j["m"] = f.m;
        } else {
          j["fourier_cos"] = f.cos_coeffs;
          j["fourier_sin"] = f.sin_coeffs;
        }
      },
      m.initial);
  return j;
}

}  // namespace ncflow
