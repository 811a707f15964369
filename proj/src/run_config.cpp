#include "marg/run_config.hpp"

#include <fstream>

#include "marg/errors.hpp"

namespace marg {
namespace {

const char* strategy_name(SeedStrategy s) {
  return s == SeedStrategy::GridPromotion ? "grid" : "random";
}

SeedStrategy strategy_from_string(const std::string& s) {
  if (s == "grid") return SeedStrategy::GridPromotion;
  if (s == "random") return SeedStrategy::Random;
  throw ConfigError("unknown seed strategy: " + s);
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key " + where + key);
  }
}

}  // namespace

nlohmann::json run_config_json(const RunConfig& rc) {
  return {
      {"input", rc.input},
      {"mask", rc.mask},
      {"out", rc.out},
      {"threads", rc.threads},
      {"metric", to_string(rc.metric)},
      {"use_adaptive", rc.use_adaptive},
      {"do_merge", rc.do_merge},
      {"mix_mode", rc.mix_mode},
      {"grow",
       {
           {"tau_l", rc.grow.thresholds.tau_l},
           {"tau_s", rc.grow.thresholds.tau_s},
           {"topology", to_string(rc.grow.topology)},
           {"seed_grid", rc.grow.seed_grid},
           {"seed_window_k", rc.grow.seed_window_k},
           {"edge_fraction", rc.grow.edge_fraction},
           {"max_displacement_steps", rc.grow.max_displacement_steps},
           {"prng_seed", rc.grow.prng_seed},
           {"seed_strategy", strategy_name(rc.grow.seed_strategy)},
           {"random_seed_count", rc.grow.random_seed_count},
       }},
      {"sweep",
       {
           {"tau_s_grid", rc.sweep.tau_s_grid},
           {"tau_l_grid", rc.sweep.tau_l_grid},
           {"plateau_eps", rc.sweep.plateau_eps},
           {"plateau_window", rc.sweep.plateau_window},
           {"tau_l_during_s_sweep", rc.sweep.tau_l_during_s_sweep},
       }},
      {"merge", {{"overlap_threshold", rc.merge.overlap_threshold}}},
      {"mix",
       {
           {"max_members", rc.mix.max_members},
           {"samples_per_image", rc.mix.samples_per_image},
           {"prng_seed", rc.mix.prng_seed},
           {"p_hi", rc.mix.p_hi},
           {"p_lo", rc.mix.p_lo},
       }},
  };
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig rc;
  reject_unknown(j, {"input", "mask", "out", "threads", "metric", "use_adaptive", "do_merge",
                     "mix_mode", "grow", "sweep", "merge", "mix"},
                 "");
  rc.input = j.value("input", rc.input);
  rc.mask = j.value("mask", rc.mask);
  rc.out = j.value("out", rc.out);
  rc.threads = j.value("threads", rc.threads);
  rc.metric = sim_metric_from_string(j.value("metric", to_string(rc.metric)));
  rc.use_adaptive = j.value("use_adaptive", rc.use_adaptive);
  rc.do_merge = j.value("do_merge", rc.do_merge);
  rc.mix_mode = j.value("mix_mode", rc.mix_mode);
  if (rc.mix_mode != "regionmix" && rc.mix_mode != "binary")
    throw ConfigError("mix_mode must be regionmix or binary");

  if (j.contains("grow")) {
    const auto& g = j.at("grow");
    reject_unknown(g,
                   {"tau_l", "tau_s", "topology", "seed_grid", "seed_window_k", "edge_fraction",
                    "max_displacement_steps", "prng_seed", "seed_strategy", "random_seed_count"},
                   "grow.");
    rc.grow.thresholds.tau_l = g.value("tau_l", rc.grow.thresholds.tau_l);
    rc.grow.thresholds.tau_s = g.value("tau_s", rc.grow.thresholds.tau_s);
    rc.grow.topology = topology_from_string(g.value("topology", to_string(rc.grow.topology)));
    rc.grow.seed_grid = g.value("seed_grid", rc.grow.seed_grid);
    rc.grow.seed_window_k = g.value("seed_window_k", rc.grow.seed_window_k);
    rc.grow.edge_fraction = g.value("edge_fraction", rc.grow.edge_fraction);
    rc.grow.max_displacement_steps =
        g.value("max_displacement_steps", rc.grow.max_displacement_steps);
    rc.grow.prng_seed = g.value("prng_seed", rc.grow.prng_seed);
    rc.grow.seed_strategy =
        strategy_from_string(g.value("seed_strategy", strategy_name(rc.grow.seed_strategy)));
    rc.grow.random_seed_count = g.value("random_seed_count", rc.grow.random_seed_count);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    reject_unknown(
        s, {"tau_s_grid", "tau_l_grid", "plateau_eps", "plateau_window", "tau_l_during_s_sweep"},
        "sweep.");
    rc.sweep.tau_s_grid = s.value("tau_s_grid", rc.sweep.tau_s_grid);
    rc.sweep.tau_l_grid = s.value("tau_l_grid", rc.sweep.tau_l_grid);
    rc.sweep.plateau_eps = s.value("plateau_eps", rc.sweep.plateau_eps);
    rc.sweep.plateau_window = s.value("plateau_window", rc.sweep.plateau_window);
    rc.sweep.tau_l_during_s_sweep =
        s.value("tau_l_during_s_sweep", rc.sweep.tau_l_during_s_sweep);
  }
  if (j.contains("merge")) {
    const auto& m = j.at("merge");
    reject_unknown(m, {"overlap_threshold"}, "merge.");
    rc.merge.overlap_threshold = m.value("overlap_threshold", rc.merge.overlap_threshold);
  }
  if (j.contains("mix")) {
    const auto& m = j.at("mix");
    reject_unknown(m, {"max_members", "samples_per_image", "prng_seed", "p_hi", "p_lo"}, "mix.");
    rc.mix.max_members = m.value("max_members", rc.mix.max_members);
    rc.mix.samples_per_image = m.value("samples_per_image", rc.mix.samples_per_image);
    rc.mix.prng_seed = m.value("prng_seed", rc.mix.prng_seed);
    rc.mix.p_hi = m.value("p_hi", rc.mix.p_hi);
    rc.mix.p_lo = m.value("p_lo", rc.mix.p_lo);
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void write_run_config(const RunConfig& rc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << run_config_json(rc).dump(2) << "\n";
  if (!out) throw IoError("failed to write " + path.string());
}

}  // namespace marg
