#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "marg/adapt.hpp"
#include "marg/eval.hpp"
#include "marg/grow.hpp"
#include "marg/merge.hpp"
#include "marg/mixgen.hpp"

namespace marg {

// Everything a run needs; the resolved form is written beside every run's
// outputs so re-running from it reproduces the artifacts byte for byte.
struct RunConfig {
  GrowConfig grow;
  SweepSpec sweep = SweepSpec::defaults();
  MergeConfig merge;
  MixConfig mix;
  bool use_adaptive = true;
  bool do_merge = true;
  SimMetric metric = SimMetric::Accuracy;
  std::string mix_mode = "regionmix";  // or "binary"
  int threads = 1;
  std::string input;
  std::string mask;
  std::string out;
};

nlohmann::json run_config_json(const RunConfig& rc);
// Missing keys fall back to defaults; unknown keys are rejected to catch
// typos (ConfigError).
RunConfig run_config_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path);
void write_run_config(const RunConfig& rc, const std::filesystem::path& path);

}  // namespace marg
