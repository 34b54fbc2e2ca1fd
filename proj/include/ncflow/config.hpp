#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"

namespace ncflow {

inline constexpr std::string_view kFormatVersion = "1";

struct RunManifest {
  FlowConfig config;
  std::string family_name = "circle";  // circle, ellipse, cosine, fourier or random
  ProfileFamily initial = family::Circle{};
  Vec2 center;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  /// Write a snapshot every this many samples; 0 keeps the first and last only.
  int snapshot_every = 0;
  std::string format_version{kFormatVersion};
};

/// Flat JSON object. Unknown keys, keys that do not apply to the chosen family and
/// wrongly typed values raise ParseError naming the key (with the line for syntax
/// errors); violated constraints raise ValidationError.
RunManifest parse_config(std::string_view text);
RunManifest load_config(const std::filesystem::path& path);

/// The manifest as a flat JSON object accepted by parse_config.
nlohmann::ordered_json manifest_echo(const RunManifest& manifest);

}  // namespace ncflow
