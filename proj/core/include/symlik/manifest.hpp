#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace symlik {

// Reproducibility record written at the end of every CLI run: command,
// config echo, seed, code version, wall time, and the produced files.
// Written atomically (temp file + rename) after all named outputs exist.
struct RunManifest {
  std::string command;
  std::map<std::string, std::map<std::string, std::string>> config_echo;
  std::uint64_t master_seed = 0;
  bool seeded = false;
  std::string version;  // git describe, or "unknown"
  std::string started_at, finished_at;  // ISO 8601 UTC
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> notes;

  void write(const std::string& path) const;
};

std::string iso8601_now();
std::string git_describe_or_unknown();

}  // namespace symlik
