#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace dslasso {

/// FNV-1a 64-bit digest of a file's bytes.
std::uint64_t fnv1a64_file(const std::string& path);

/// Reproducibility record written next to every output file set. Round-trips
/// losslessly through JSON; `dslasso rerun --manifest <file>` replays the
/// command from the stored resolved configuration.
struct RunManifest {
  std::string command;
  nlohmann::json config;  // fully resolved configuration
  std::uint64_t seed = 0;
  std::string artifact_version;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  void write(const std::string& path) const;
  static RunManifest read(const std::string& path);
};

}  // namespace dslasso
