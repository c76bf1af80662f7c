#include "dslasso/manifest.hpp"

#include <fstream>
#include <sstream>

#include "dslasso/errors.hpp"

namespace dslasso {

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open file for digest: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return hash;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["artifact_version"] = artifact_version;
  j["input_digests"] = input_digests;
  j["wall_seconds"] = wall_seconds;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config = j.at("config");
  m.seed = j.at("seed").get<std::uint64_t>();
  m.artifact_version = j.at("artifact_version").get<std::string>();
  if (j.contains("input_digests"))
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
  m.wall_seconds = j.value("wall_seconds", 0.0);
  return m;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write manifest: " + path);
  out << to_json().dump(2) << '\n';
}

RunManifest RunManifest::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read manifest: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace dslasso
