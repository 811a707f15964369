#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "marg/errors.hpp"
#include "marg/run_config.hpp"

using namespace marg;
namespace fs = std::filesystem;

namespace {

RunConfig fancy_config() {
  RunConfig rc;
  rc.input = "in.png";
  rc.mask = "gt.png";
  rc.out = "results";
  rc.threads = 4;
  rc.metric = SimMetric::IoU;
  rc.use_adaptive = false;
  rc.do_merge = false;
  rc.mix_mode = "binary";
  rc.grow.thresholds = {7, 21};
  rc.grow.topology = Topology::Cartesian;
  rc.grow.seed_grid = 12;
  rc.grow.seed_window_k = 3;
  rc.grow.edge_fraction = 0.4;
  rc.grow.max_displacement_steps = 9;
  rc.grow.prng_seed = 31337;
  rc.grow.seed_strategy = SeedStrategy::Random;
  rc.grow.random_seed_count = 17;
  rc.sweep.tau_s_grid = {2, 6, 10};
  rc.sweep.tau_l_grid = {4, 8};
  rc.sweep.plateau_eps = 0.01;
  rc.sweep.plateau_window = 3;
  rc.sweep.tau_l_during_s_sweep = 14;
  rc.merge.overlap_threshold = 0.32;
  rc.mix.max_members = 3;
  rc.mix.samples_per_image = 7;
  rc.mix.prng_seed = 5;
  rc.mix.p_hi = 0.9;
  rc.mix.p_lo = 0.1;
  return rc;
}

}  // namespace

TEST_CASE("config json round-trips every field") {
  const RunConfig rc = fancy_config();
  const nlohmann::json j = run_config_json(rc);
  const RunConfig back = run_config_from_json(j);
  CHECK(run_config_json(back) == j);
  CHECK(back.grow == rc.grow);
  CHECK(back.metric == SimMetric::IoU);
  CHECK(back.mix_mode == "binary");
  CHECK(back.sweep.tau_s_grid == rc.sweep.tau_s_grid);
  CHECK(back.merge.overlap_threshold == 0.32);
  CHECK(back.mix.samples_per_image == 7);
}

TEST_CASE("missing keys fall back to defaults") {
  const RunConfig rc = run_config_from_json(nlohmann::json::object());
  CHECK(run_config_json(rc) == run_config_json(RunConfig{}));

  const RunConfig partial = run_config_from_json({{"grow", {{"tau_l", 5}}}});
  CHECK(partial.grow.thresholds.tau_l == 5);
  CHECK(partial.grow.thresholds.tau_s == RunConfig{}.grow.thresholds.tau_s);
  CHECK(partial.use_adaptive);
}

TEST_CASE("unknown keys are typos, not extensions") {
  CHECK_THROWS_AS(run_config_from_json({{"inptu", "a.png"}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"grow", {{"tau", 3}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"sweep", {{"eps", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"merge", {{"threshold", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"mix", {{"samples", 2}}}}), ConfigError);
}

TEST_CASE("enumerated strings are validated") {
  CHECK_THROWS_AS(run_config_from_json({{"metric", "dice"}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"mix_mode", "both"}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"grow", {{"topology", "torus"}}}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json({{"grow", {{"seed_strategy", "spiral"}}}}), ConfigError);
}

TEST_CASE("config files round-trip on disk") {
  const fs::path dir =
      fs::temp_directory_path() / ("marg_cfg_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path file = dir / "config.json";

  const RunConfig rc = fancy_config();
  write_run_config(rc, file);
  const RunConfig back = load_run_config(file);
  CHECK(run_config_json(back) == run_config_json(rc));

  CHECK_THROWS_AS(load_run_config(dir / "missing.json"), IoError);
  std::ofstream(dir / "broken.json") << "{not json";
  CHECK_THROWS_AS(load_run_config(dir / "broken.json"), FormatError);

  fs::remove_all(dir);
}
