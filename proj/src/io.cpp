#include "lrc/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lrc {

std::string format_full(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on any platform
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("CSV row width mismatch");
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
  if (!out) throw std::runtime_error("error while writing: " + path);
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  if (manifest.has_seed) j["seed"] = manifest.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.config) cfg[k] = v;
  j["config"] = cfg;
  j["started_utc"] = manifest.started_utc;
  j["finished_utc"] = manifest.finished_utc;
  j["outputs"] = manifest.outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  nlohmann::json j;
  in >> j;
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.version = j.value("version", std::string());
  if (j.contains("seed")) {
    m.seed = j["seed"].get<std::uint64_t>();
    m.has_seed = true;
  }
  if (j.contains("config"))
    for (const auto& [k, v] : j["config"].items())
      m.config.emplace_back(k, v.get<std::string>());
  m.started_utc = j.value("started_utc", std::string());
  m.finished_utc = j.value("finished_utc", std::string());
  if (j.contains("outputs"))
    for (const auto& o : j["outputs"]) m.outputs.push_back(o.get<std::string>());
  return m;
}

}  // namespace lrc
