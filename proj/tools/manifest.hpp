#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fracstab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Provenance record written next to every output set.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::string input_path;
  std::string input_digest;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  std::string to_json() const;
};

/// Writes `text` to dir/name and records it in the manifest.
void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& text,
                  RunManifest& manifest);

}  // namespace fracstab::cli
