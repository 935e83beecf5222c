#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace jnr::cli {

/// Hex SHA-256 of a file's bytes. Throws IoError if unreadable.
std::string Sha256File(const std::filesystem::path& path);

/// Record of one invocation: config snapshot, input digests, version, seed
/// and timing. Outputs depend only on the fields other than timing.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::ordered_json config, std::uint64_t seed);

  void AddInput(const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);
  void Write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::ordered_json config_;
  std::uint64_t seed_;
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::chrono::system_clock::time_point started_wall_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace jnr::cli
