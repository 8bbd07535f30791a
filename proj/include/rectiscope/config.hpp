#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectiscope/measure.hpp"
#include "rectiscope/secant.hpp"

namespace rectiscope {

inline constexpr int kSchemaVersion = 1;

/// Every parameter a CLI run depends on. Field names double as JSON keys.
struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string summary;
  int n = 1;

  double p = 2.0;
  double alpha = 0.0;
  double r = 1.0;
  double r0 = 1.0;
  double ratio = 0.5;
  int scales = 12;
  bool centered = false;
  std::string centers = "all";
  std::uint64_t seed = 42;

  std::string method = "auto";
  std::string strategy = "annulus";
  std::int64_t samples = 100'000;
  std::int64_t budget = 100'000'000;

  SecantConfig secant;
  std::string mode = "empirical";
  double dini_gamma = 0.0;  // 0 disables the Dini-weighted Jones variant
  std::int64_t x_index = 0;
  std::int64_t frame_samples = 10'000;

  int k = 4;
  int chop_levels = 20;

  std::string kind = "plane";
  int m = 2;
  std::int64_t count = 1024;
  int level = 3;
  double noise = 0.01;
  std::string weights = "area";

  std::string suite = "all";
  double holder_p = 3.0;
  double holder_alpha = 0.5;
  int volume_trials = 1000;
  int volume_max_dim = 4;
  int volume_m = 5;
  int jones_scales = 12;

  bool timing = false;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Strict reader: unknown keys and wrongly typed values are rejected with the
/// offending field in the message (InputError).
RunConfig run_config_from_json(const nlohmann::json& j);

/// Parses a JSON file; syntax errors report line and column.
RunConfig load_run_config(const std::string& path);

/// Center selection: "all", "sample:K", "index:i,j,...", "file:PATH" (one index per line).
std::vector<Index> select_centers(const std::string& selector, Index size, std::uint64_t seed);

}  // namespace rectiscope
