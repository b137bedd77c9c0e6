#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nslab/grid.hpp"
#include "nslab/io.hpp"

namespace runner {

inline constexpr const char* kVersion = "0.1.0";

// exit codes shared by every subcommand
inline constexpr int kOk = 0;
inline constexpr int kCheckFailure = 2;
inline constexpr int kConfigError = 3;
inline constexpr int kUnresolved = 4;

struct ExperimentConfig {
  nslab::GridSpec grid{1.0, 32};
  double mesh_t = 0.25;
  int mesh_m = 64;
  std::string scheme = "uniform";
  std::string preset = "zero";
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> eps_ladder;
  std::vector<std::string> norms{"l2", "h1semi", "linf", "l4", "l6"};
  std::string out_dir;  // config "out"; a --out flag overrides it
  std::map<std::string, double> tolerances;
  nslab::OrderedJson echo;  // parsed document, echoed into the manifest

  double tol(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

// Strict parse: unknown keys, wrong types, and precondition violations are
// all config errors. Returns nullopt with a message and writes nothing.
std::optional<ExperimentConfig> load_config(const std::string& path, std::string& err);

// Runs one subcommand end to end; returns the process exit code.
int run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace runner
