#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace mhn::cli {

inline constexpr const char* kManifestSchema = "mhn.manifest.v1";

struct RunManifest {
  std::string command;
  nlohmann::json full_config;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;  // ISO-8601, UTC
  std::vector<std::string> output_paths;
};

std::string tool_version();
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

// <data path> + ".manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& data_path);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace mhn::cli
