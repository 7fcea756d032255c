#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "promor/rng.hpp"
#include "promor/util.hpp"
#include "promor/version.hpp"

namespace promor {

inline std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = fnv1a64(data);
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

inline std::string hash_file(const std::string& path) {
  return fnv1a64_hex(read_file(path));
}

// Provenance sidecar written next to every command's artifacts: tool version,
// root seed, the full flag set, and content hashes of each input. No
// timestamps, so reruns stay byte-identical.
inline void write_manifest(const std::string& out_dir,
                           const std::string& command, std::uint64_t seed,
                           const nlohmann::json& config,
                           const std::vector<std::string>& input_paths,
                           const std::vector<std::string>& output_names) {
  nlohmann::json j;
  j["tool"] = std::string(kToolName);
  j["version"] = std::string(kVersion);
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  auto inputs = nlohmann::json::array();
  for (const auto& p : input_paths)
    inputs.push_back({{"path", p}, {"fnv1a64", hash_file(p)}});
  j["inputs"] = inputs;
  j["outputs"] = output_names;
  write_file(out_dir + "/manifest_" + command + ".json", j.dump(2) + "\n");
}

}  // namespace promor
