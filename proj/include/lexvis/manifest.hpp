#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lexvis/error.hpp"

namespace lexvis {

// FNV-1a, 64-bit. Small, dependency-free, and stable across platforms — all a
// run manifest needs to make "same inputs, same outputs" checkable.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::uint64_t fnv1a64(const std::string& text) {
  return fnv1a64(text.data(), text.size());
}

inline std::string fnv1a64_hex(std::uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (std::size_t i = 0; i < 16; ++i) {
    out[15 - i] = digits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

inline std::uint64_t file_fnv1a64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(buffer);
    const std::size_t n = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

// Machine-readable record of one command run: what was read, what was
// written, and under which configuration. Output entries carry only the file
// name (not the directory), so reruns into different output directories
// produce byte-identical manifests. No clocks, no hostnames.
struct Manifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::filesystem::path>> inputs;   // role -> path
  std::vector<std::pair<std::string, std::filesystem::path>> outputs;  // role -> path

  void add_input(const std::string& role, const std::filesystem::path& path) {
    inputs.emplace_back(role, path);
  }
  void add_output(const std::string& role, const std::filesystem::path& path) {
    outputs.emplace_back(role, path);
  }
};

inline nlohmann::ordered_json manifest_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [role, path] : m.inputs) {
    j["inputs"][role] = {{"path", path.string()},
                         {"fnv1a64", fnv1a64_hex(file_fnv1a64(path))}};
  }
  j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [role, path] : m.outputs) {
    j["outputs"][role] = {{"file", path.filename().string()},
                          {"fnv1a64", fnv1a64_hex(file_fnv1a64(path))}};
  }
  return j;
}

inline void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open manifest for writing: " + path.string());
  out << manifest_json(m).dump(2) << '\n';
  if (!out.good()) throw DataError("failed writing manifest: " + path.string());
}

}  // namespace lexvis
