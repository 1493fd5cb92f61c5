#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrc {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_full(double v);

/// Writes rows of preformatted cells as CSV.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// One manifest per CLI run: the resolved configuration plus provenance.
/// Replaying a manifest re-runs the command with the stored configuration
/// and reproduces the outputs byte for byte.
struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<std::pair<std::string, std::string>> config;  // resolved flags
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
};

std::string utc_timestamp_now();

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace lrc
