#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "uape/config.hpp"
#include "uape/error.hpp"
#include "uape/version.hpp"

namespace uape {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open \"" + path + "\" for digest");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64_hex(bytes);
}

struct ManifestInput {
  std::string role;  // e.g. "graph", "attitudes"
  std::string path;
};

// The manifest doubles as a config file: metadata lives in comments, the
// resolved configuration (all defaults materialized) in plain key = value
// lines. Replaying a run is `simulate --config <manifest>` with the same
// input files.
inline void write_manifest(std::ostream& out, std::string_view command,
                           const SimulationConfig& config,
                           const std::vector<ManifestInput>& inputs,
                           const std::vector<std::string>& outputs) {
  out << "# uape " << kVersion << " run manifest\n";
  out << "# command = " << command << "\n";
  out << "# config_digest = " << fnv1a64_hex(config_text(config)) << "\n";
  for (const ManifestInput& input : inputs)
    out << "# input." << input.role << " = " << input.path
        << " fnv1a64=" << file_digest(input.path) << "\n";
  for (const std::string& output : outputs) out << "# output = " << output << "\n";
  write_config(out, config);
}

}  // namespace uape
