#include "run_manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fracvar/errors.hpp"

namespace fracvar::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fnv1a_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a_hex(buffer.str());
}

void RunManifest::add_option(std::string key, std::string value) {
  options.emplace_back(std::move(key), std::move(value));
}

void RunManifest::add_input(std::string name, std::string digest) {
  input_digests.emplace_back(std::move(name), std::move(digest));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  nlohmann::ordered_json opts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  j["options"] = std::move(opts);
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : input_digests) inputs[k] = v;
  j["input_digests"] = std::move(inputs);
  j["output_digest"] = output_digest;
  j["wall_ms"] = wall_ms;
  return j.dump(2) + "\n";
}

void RunManifest::write_next_to(const std::filesystem::path& output) const {
  const std::filesystem::path path = output.string() + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << to_json();
}

}  // namespace fracvar::cli
