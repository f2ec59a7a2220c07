#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fracvar::cli {

/// FNV-1a 64-bit digest, printed as 16 hex digits. Stable across runs and
/// platforms; used to pin inputs and outputs in run manifests.
std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

/// Reproducibility record accompanying every file a command writes. Two
/// runs with identical inputs must produce identical output digests; only
/// wall_ms may differ between their manifests.
struct RunManifest {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> options;
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::string output_digest;
  double wall_ms = 0.0;

  void add_option(std::string key, std::string value);
  void add_input(std::string name, std::string digest);

  std::string to_json() const;
  /// Writes <output>.manifest.json next to the output file.
  void write_next_to(const std::filesystem::path& output) const;
};

}  // namespace fracvar::cli
