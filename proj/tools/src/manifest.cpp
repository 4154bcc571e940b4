#include "mhn_cli/manifest.hpp"

#include <chrono>
#include <ctime>

#include "mhn_cli/io.hpp"

#ifndef MHN_VERSION
#define MHN_VERSION "unknown"
#endif

namespace mhn::cli {

std::string tool_version() { return MHN_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"schema", kManifestSchema},     {"command", m.command},
          {"full_config", m.full_config},  {"seed", m.seed},
          {"tool_version", m.tool_version}, {"timestamp", m.timestamp},
          {"output_paths", m.output_paths}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != kManifestSchema) {
    throw std::invalid_argument("manifest: unsupported schema '" + j.value("schema", std::string()) + "'");
  }
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.full_config = j.at("full_config");
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
  return m;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& data_path) {
  return data_path.string() + ".manifest.json";
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  write_file(path, to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace mhn::cli
