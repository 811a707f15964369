#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "marg/adapt.hpp"
#include "marg/errors.hpp"
#include "marg/eval.hpp"
#include "marg/grow.hpp"
#include "marg/merge.hpp"
#include "marg/mixgen.hpp"
#include "marg/png_io.hpp"
#include "marg/run_config.hpp"
#include "marg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace marg;

namespace {

int effective_threads(const RunConfig& rc) {
  return rc.threads > 0 ? rc.threads : omp_get_max_threads();
}

ThresholdPair parse_tau_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("--fixed-tau expects L,S");
  try {
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--fixed-tau expects two integers as L,S");
  }
}

// "grid", "random", or "random:N"
void parse_strategy(const std::string& s, GrowConfig& cfg) {
  if (s == "grid") {
    cfg.seed_strategy = SeedStrategy::GridPromotion;
    return;
  }
  if (s.rfind("random", 0) == 0) {
    cfg.seed_strategy = SeedStrategy::Random;
    if (s.size() > 6) {
      if (s[6] != ':') throw ConfigError("--seed-strategy expects grid or random[:N]");
      try {
        cfg.random_seed_count = std::stoi(s.substr(7));
      } catch (const std::exception&) {
        throw ConfigError("--seed-strategy random:N expects an integer N");
      }
    }
    return;
  }
  throw ConfigError("--seed-strategy expects grid or random[:N]");
}

struct CommonOpts {
  std::string input, mask, out, config;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string topology, fixed_tau, strategy, metric;
  double overlap_threshold = 0.1;
  bool no_merge = false;

  CLI::Option* o_input = nullptr;
  CLI::Option* o_mask = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_config = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_threads = nullptr;
  CLI::Option* o_topology = nullptr;
  CLI::Option* o_fixed_tau = nullptr;
  CLI::Option* o_strategy = nullptr;
  CLI::Option* o_metric = nullptr;
  CLI::Option* o_overlap = nullptr;
  CLI::Option* o_no_merge = nullptr;

  void add_to(CLI::App* cmd, bool with_mask, bool with_metric) {
    o_input = cmd->add_option("--input,-i", input, "input image PNG (directory in batch mode)");
    if (with_mask)
      o_mask = cmd->add_option("--mask,-m", mask, "ground-truth mask PNG (directory in batch mode)");
    o_out = cmd->add_option("--out,-o", out, "output directory (default: out)");
    o_config = cmd->add_option("--config,-c", config, "config JSON; flags override its values");
    o_seed = cmd->add_option("--seed", seed, "PRNG seed");
    o_threads = cmd->add_option("--threads,-t", threads, "worker count (0 = all cores)");
    o_topology = cmd->add_option("--topology", topology, "cartesian or modular");
    o_fixed_tau =
        cmd->add_option("--fixed-tau", fixed_tau, "fixed thresholds L,S; disables adaptation");
    o_strategy = cmd->add_option("--seed-strategy", strategy, "grid or random[:N]");
    o_overlap = cmd->add_option("--overlap-threshold", overlap_threshold,
                                "mergeability ratio cutoff");
    o_no_merge = cmd->add_flag("--no-merge", no_merge, "skip region merging");
    if (with_metric)
      o_metric =
          cmd->add_option("--metric", metric, "accuracy, precision, recall, f1, or iou");
  }

  RunConfig resolve() const {
    RunConfig rc;
    if (o_config && o_config->count()) rc = load_run_config(config);
    if (o_input && o_input->count()) rc.input = input;
    if (o_mask && o_mask->count()) rc.mask = mask;
    if (o_out && o_out->count()) rc.out = out;
    if (o_seed && o_seed->count()) {
      rc.grow.prng_seed = seed;
      rc.mix.prng_seed = seed;
    }
    if (o_threads && o_threads->count()) rc.threads = threads;
    if (o_topology && o_topology->count()) rc.grow.topology = topology_from_string(topology);
    if (o_fixed_tau && o_fixed_tau->count()) {
      rc.grow.thresholds = parse_tau_pair(fixed_tau);
      rc.use_adaptive = false;
    }
    if (o_strategy && o_strategy->count()) parse_strategy(strategy, rc.grow);
    if (o_overlap && o_overlap->count()) rc.merge.overlap_threshold = overlap_threshold;
    if (o_no_merge && o_no_merge->count()) rc.do_merge = false;
    if (o_metric && o_metric->count()) rc.metric = sim_metric_from_string(metric);
    if (rc.out.empty()) rc.out = "out";
    return rc;
  }
};

void write_json_file(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed to write " + path.string());
}

struct PipelineArtifacts {
  RegionSet regions;  // post-merge when merging is on
  SweepReport sweep;
  bool swept = false;
  RegionMap map;  // overlap-resolved, hole-filled
  GrowConfig used;
};

PipelineArtifacts run_pipeline(const Image& img, const RunConfig& rc, int sweep_threads) {
  PipelineArtifacts a;
  GrowConfig cfg = rc.grow;
  if (rc.use_adaptive) {
    a.sweep = adaptive_thresholds(img, cfg, rc.sweep, sweep_threads);
    a.swept = true;
    cfg.thresholds = a.sweep.chosen;
  }
  RegionSet rs = segment(img, cfg);
  if (rc.do_merge) rs = merge_chains(rs, mergeability(rs, rc.merge));
  a.map = fill_holes(resolve_overlaps(rs, img));
  a.used = cfg;
  a.regions = std::move(rs);
  return a;
}

RegionMapMeta map_meta(const PipelineArtifacts& a) {
  RegionMapMeta meta;
  meta.tau_l = a.used.thresholds.tau_l;
  meta.tau_s = a.used.thresholds.tau_s;
  meta.topology = a.used.topology;
  meta.prng_seed = a.used.prng_seed;
  meta.coverage = coverage(a.regions);

  std::vector<const Region*> order;
  for (const Region& r : a.regions.regions) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const Region* x, const Region* y) { return x->id < y->id; });
  std::vector<std::uint64_t> counts(order.size() + 1, 0);
  for (std::uint32_t id : a.map.ids) ++counts[id];
  for (std::size_t k = 0; k < order.size(); ++k)
    meta.regions.push_back({static_cast<std::uint32_t>(k + 1), counts[k + 1], order[k]->seed});
  return meta;
}

Rgb palette_color(std::uint32_t id) {
  if (id == 0) return {0, 0, 0};
  const double h = std::fmod(0.6180339887498949 * id, 1.0) * 6.0;
  const double s = 0.55, v = 0.95;
  const int sector = static_cast<int>(h);
  const double f = h - sector;
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = v, g = t, b = p;
  switch (sector % 6) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    case 5: r = v, g = p, b = q; break;
  }
  auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
  return {byte(r), byte(g), byte(b)};
}

Image colorize(const RegionMap& rm) {
  Image img(rm.height, rm.width);
  for (int h = 0; h < rm.height; ++h)
    for (int w = 0; w < rm.width; ++w) img.set(h, w, palette_color(rm.at(h, w)));
  return img;
}

Image draw_boundary(const Image& base, const BinaryMask& mask) {
  Image img = base;
  for (int h = 0; h < mask.height; ++h) {
    for (int w = 0; w < mask.width; ++w) {
      const bool v = mask.at(h, w);
      const bool boundary = (h > 0 && mask.at(h - 1, w) != v) ||
                            (h + 1 < mask.height && mask.at(h + 1, w) != v) ||
                            (w > 0 && mask.at(h, w - 1) != v) ||
                            (w + 1 < mask.width && mask.at(h, w + 1) != v);
      if (boundary && v) img.set(h, w, {255, 0, 0});
    }
  }
  return img;
}

nlohmann::json pixel_metrics_json(const PixelMetrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"miou", m.miou}};
}

nlohmann::json sim_report_json(const SimReport& rep) {
  nlohmann::json per_region = nlohmann::json::array();
  for (const auto& r : rep.per_region)
    per_region.push_back({{"id", r.id}, {"sim", r.sim}, {"class", r.cls}});
  return {{"image_score", rep.image_score},
          {"coverage", rep.coverage},
          {"n_regions", rep.n_regions},
          {"per_region", per_region}};
}

void write_sweep_csv(const std::vector<SweepPoint>& pts, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "tau,coverage,n_regions\n";
  for (const auto& p : pts)
    out << p.tau << "," << nlohmann::json(p.coverage).dump() << "," << p.n_regions << "\n";
  if (!out) throw IoError("failed to write " + path.string());
}

// ---- subcommand bodies ----

void cmd_segment(const CommonOpts& common, bool viz) {
  RunConfig rc = common.resolve();
  if (rc.input.empty()) throw ConfigError("segment requires --input");
  fs::create_directories(rc.out);
  const Image img = load_image(rc.input);
  const PipelineArtifacts a = run_pipeline(img, rc, effective_threads(rc));

  save_region_map(a.map, map_meta(a), fs::path(rc.out) / "region_map.png");
  if (a.swept) write_json_file(sweep_report_json(a.sweep), fs::path(rc.out) / "sweep.json");
  if (viz) save_image(colorize(a.map), fs::path(rc.out) / "viz.png");
  write_run_config(rc, fs::path(rc.out) / "config.json");

  std::printf("regions=%zu coverage=%.6f tau_l=%d tau_s=%d\n", a.regions.regions.size(),
              coverage(a.regions), a.used.thresholds.tau_l, a.used.thresholds.tau_s);
}

void cmd_sweep(const CommonOpts& common, bool csv) {
  RunConfig rc = common.resolve();
  if (rc.input.empty()) throw ConfigError("sweep requires --input");
  fs::create_directories(rc.out);
  const Image img = load_image(rc.input);
  const SweepReport rep = adaptive_thresholds(img, rc.grow, rc.sweep, effective_threads(rc));
  write_json_file(sweep_report_json(rep), fs::path(rc.out) / "sweep.json");
  if (csv) {
    write_sweep_csv(rep.seed_sweep, fs::path(rc.out) / "seed_sweep.csv");
    write_sweep_csv(rep.local_sweep, fs::path(rc.out) / "local_sweep.csv");
  }
  write_run_config(rc, fs::path(rc.out) / "config.json");
  std::printf("tau_s=%d (%s) tau_l=%d (%s)\n", rep.chosen.tau_s,
              rep.seed_converged ? "plateau" : "no plateau", rep.chosen.tau_l,
              rep.local_converged ? "plateau" : "no plateau");
}

nlohmann::json components_json(const std::vector<Region>& pre,
                               const std::vector<std::vector<int>>& components) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& comp : components) {
    std::uint32_t merged_id = pre[comp.front()].id;
    std::vector<std::uint32_t> members;
    for (int i : comp) {
      members.push_back(pre[i].id);
      merged_id = std::min(merged_id, pre[i].id);
    }
    arr.push_back({{"id", merged_id}, {"members", members}});
  }
  return arr;
}

void cmd_merge(const CommonOpts& common, const std::string& map_path) {
  RunConfig rc = common.resolve();
  fs::create_directories(rc.out);

  if (!map_path.empty()) {
    auto [map, meta] = load_region_map(map_path);
    RegionSet rs;
    rs.height = map.height;
    rs.width = map.width;
    rs.covered = BinaryMask(map.height, map.width);
    for (const auto& entry : meta.regions) {
      Region r;
      r.id = entry.id;
      r.seed = entry.seed;
      r.pixels = PixelSet(map.height, map.width);
      rs.regions.push_back(std::move(r));
    }
    std::vector<std::size_t> index_of_id;  // sparse map id -> region index
    index_of_id.assign(map.max_id() + 1, SIZE_MAX);
    for (std::size_t i = 0; i < rs.regions.size(); ++i) {
      if (rs.regions[i].id >= index_of_id.size())
        throw FormatError("manifest region id missing from map");
      index_of_id[rs.regions[i].id] = i;
    }
    for (std::size_t i = 0; i < map.ids.size(); ++i) {
      if (map.ids[i] == 0) continue;
      if (map.ids[i] >= index_of_id.size() || index_of_id[map.ids[i]] == SIZE_MAX)
        throw FormatError("map id missing from manifest");
      rs.regions[index_of_id[map.ids[i]]].pixels.set(static_cast<int>(i));
      rs.covered.bits[i] = 1;
    }

    const MergeMatrix m = mergeability(rs, rc.merge);
    const auto components = merge_components(m);
    const RegionSet merged = merge_chains(rs, m);

    // Members are disjoint, so ownership is direct: old id -> merged map id.
    std::vector<std::uint32_t> new_id_of_old(index_of_id.size(), 0);
    for (std::size_t k = 0; k < components.size(); ++k) {
      // merge_chains sorts output by id; recover each component's position.
      std::uint32_t merged_id = rs.regions[components[k].front()].id;
      for (int i : components[k]) merged_id = std::min(merged_id, rs.regions[i].id);
      std::uint32_t new_id = 0;
      for (std::size_t t = 0; t < merged.regions.size(); ++t)
        if (merged.regions[t].id == merged_id) new_id = static_cast<std::uint32_t>(t + 1);
      for (int i : components[k]) new_id_of_old[rs.regions[i].id] = new_id;
    }
    RegionMap out_map(map.height, map.width);
    for (std::size_t i = 0; i < map.ids.size(); ++i)
      out_map.ids[i] = map.ids[i] ? new_id_of_old[map.ids[i]] : 0;

    RegionMapMeta out_meta;
    out_meta.tau_l = meta.tau_l;
    out_meta.tau_s = meta.tau_s;
    out_meta.topology = meta.topology;
    out_meta.prng_seed = meta.prng_seed;
    out_meta.coverage = meta.coverage;
    std::vector<std::uint64_t> counts(merged.regions.size() + 1, 0);
    for (std::uint32_t id : out_map.ids) ++counts[id];
    for (std::size_t t = 0; t < merged.regions.size(); ++t)
      out_meta.regions.push_back(
          {static_cast<std::uint32_t>(t + 1), counts[t + 1], merged.regions[t].seed});
    save_region_map(out_map, out_meta, fs::path(rc.out) / "region_map.png");
    write_json_file({{"overlap_threshold", rc.merge.overlap_threshold},
                     {"components", components_json(rs.regions, components)}},
                    fs::path(rc.out) / "merge.json");
    write_run_config(rc, fs::path(rc.out) / "config.json");
    std::printf("regions=%zu merged=%zu\n", rs.regions.size(), merged.regions.size());
    return;
  }

  if (rc.input.empty()) throw ConfigError("merge requires --map or --input");
  const Image img = load_image(rc.input);
  GrowConfig cfg = rc.grow;
  PipelineArtifacts a;
  if (rc.use_adaptive) {
    a.sweep = adaptive_thresholds(img, cfg, rc.sweep, effective_threads(rc));
    a.swept = true;
    cfg.thresholds = a.sweep.chosen;
  }
  const RegionSet pre = segment(img, cfg);
  const MergeMatrix m = mergeability(pre, rc.merge);
  const auto components = merge_components(m);
  a.regions = merge_chains(pre, m);
  a.map = fill_holes(resolve_overlaps(a.regions, img));
  a.used = cfg;

  save_region_map(a.map, map_meta(a), fs::path(rc.out) / "region_map.png");
  if (a.swept) write_json_file(sweep_report_json(a.sweep), fs::path(rc.out) / "sweep.json");
  write_json_file({{"overlap_threshold", rc.merge.overlap_threshold},
                   {"components", components_json(pre.regions, components)}},
                  fs::path(rc.out) / "merge.json");
  write_run_config(rc, fs::path(rc.out) / "config.json");
  std::printf("regions=%zu merged=%zu\n", pre.regions.size(), a.regions.regions.size());
}

struct EvalResult {
  SimReport weighted;
  PixelMetrics oracle;
};

EvalResult eval_one(const Image& img, const BinaryMask& gt, const RunConfig& rc,
                    int sweep_threads, BinaryMask* pred_out = nullptr) {
  const PipelineArtifacts a = run_pipeline(img, rc, sweep_threads);
  EvalResult res;
  res.weighted = image_sim(a.regions, gt, rc.metric);
  auto [pred, metrics] = oracle_mask(a.regions, gt, img);
  res.oracle = metrics;
  if (pred_out) *pred_out = std::move(pred);
  return res;
}

nlohmann::json eval_json(const EvalResult& r, SimMetric metric) {
  return {{"metric", to_string(metric)},
          {"weighted", sim_report_json(r.weighted)},
          {"oracle", pixel_metrics_json(r.oracle)}};
}

void print_eval(const EvalResult& r, SimMetric metric) {
  std::printf("weighted %-9s %.6f  (coverage %.6f, regions %d)\n", to_string(metric).c_str(),
              r.weighted.image_score, r.weighted.coverage, r.weighted.n_regions);
  std::printf("oracle   accuracy %.6f precision %.6f recall %.6f f1 %.6f miou %.6f\n",
              r.oracle.accuracy, r.oracle.precision, r.oracle.recall, r.oracle.f1,
              r.oracle.miou);
}

void cmd_eval(const CommonOpts& common, bool overlay) {
  RunConfig rc = common.resolve();
  if (rc.input.empty()) throw ConfigError("eval requires --input");
  if (rc.mask.empty()) throw ConfigError("eval requires --mask");
  fs::create_directories(rc.out);

  if (fs::is_directory(rc.input)) {
    if (!fs::is_directory(rc.mask))
      throw ConfigError("batch eval needs --mask to be a directory of masks");
    std::vector<fs::path> images;
    for (const auto& e : fs::directory_iterator(rc.input))
      if (e.path().extension() == ".png") images.push_back(e.path());
    std::sort(images.begin(), images.end());
    if (images.empty()) throw ConfigError("no .png images in " + rc.input);

    std::vector<EvalResult> results(images.size());
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads(rc))
    for (long i = 0; i < static_cast<long>(images.size()); ++i) {
      const Image img = load_image(images[i]);
      const BinaryMask gt = load_mask(fs::path(rc.mask) / images[i].filename());
      results[i] = eval_one(img, gt, rc, 1);
    }

    nlohmann::json per_image = nlohmann::json::array();
    std::vector<double> acc, prec, rec, f1, miou, wscore;
    for (std::size_t i = 0; i < images.size(); ++i) {
      per_image.push_back({{"image", images[i].filename().string()},
                           {"weighted_score", results[i].weighted.image_score},
                           {"oracle", pixel_metrics_json(results[i].oracle)}});
      acc.push_back(results[i].oracle.accuracy);
      prec.push_back(results[i].oracle.precision);
      rec.push_back(results[i].oracle.recall);
      f1.push_back(results[i].oracle.f1);
      miou.push_back(results[i].oracle.miou);
      wscore.push_back(results[i].weighted.image_score);
    }
    auto mean_of = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto std_of = [&](const std::vector<double>& v) {
      const double m = mean_of(v);
      double s = 0;
      for (double x : v) s += (x - m) * (x - m);
      return std::sqrt(s / static_cast<double>(v.size()));
    };
    auto agg = [&](const std::vector<double>& v) {
      return nlohmann::json{{"mean", mean_of(v)}, {"std", std_of(v)}};
    };
    const nlohmann::json batch = {{"images", images.size()},
                                  {"per_image", per_image},
                                  {"accuracy", agg(acc)},
                                  {"precision", agg(prec)},
                                  {"recall", agg(rec)},
                                  {"f1", agg(f1)},
                                  {"miou", agg(miou)},
                                  {"weighted_score", agg(wscore)}};
    write_json_file(batch, fs::path(rc.out) / "batch.json");
    write_run_config(rc, fs::path(rc.out) / "config.json");
    std::printf("%-16s %10s %10s\n", "metric", "mean", "std");
    auto row = [&](const char* name, const std::vector<double>& v) {
      std::printf("%-16s %10.6f %10.6f\n", name, mean_of(v), std_of(v));
    };
    row("accuracy", acc);
    row("precision", prec);
    row("recall", rec);
    row("f1", f1);
    row("miou", miou);
    row("weighted_score", wscore);
    return;
  }

  const Image img = load_image(rc.input);
  const BinaryMask gt = load_mask(rc.mask);
  BinaryMask pred;
  const EvalResult res = eval_one(img, gt, rc, effective_threads(rc), &pred);
  write_json_file(eval_json(res, rc.metric), fs::path(rc.out) / "eval.json");
  if (overlay) save_image(draw_boundary(img, pred), fs::path(rc.out) / "overlay.png");
  write_run_config(rc, fs::path(rc.out) / "config.json");
  print_eval(res, rc.metric);
}

void cmd_ablate(const CommonOpts& common) {
  RunConfig rc = common.resolve();
  if (rc.input.empty()) throw ConfigError("ablate requires --input");
  if (rc.mask.empty()) throw ConfigError("ablate requires --mask");
  fs::create_directories(rc.out);
  const Image img = load_image(rc.input);
  const BinaryMask gt = load_mask(rc.mask);

  AblateOptions opt;
  opt.base = rc.grow;
  opt.sweep = rc.sweep;
  opt.merge = rc.merge;
  opt.n_threads = effective_threads(rc);
  const auto rows = ablate(img, gt, opt);

  nlohmann::json arr = nlohmann::json::array();
  std::printf("%-10s %9s %9s %9s %9s %9s %9s %9s\n", "variant", "accuracy", "precision",
              "recall", "f1", "miou", "coverage", "regions");
  for (const auto& row : rows) {
    arr.push_back({{"variant", variant_name(row.variant)},
                   {"accuracy", row.metrics.accuracy},
                   {"precision", row.metrics.precision},
                   {"recall", row.metrics.recall},
                   {"f1", row.metrics.f1},
                   {"miou", row.metrics.miou},
                   {"coverage", row.coverage},
                   {"n_regions", row.n_regions}});
    std::printf("%-10s %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %9d\n",
                variant_name(row.variant).c_str(), row.metrics.accuracy, row.metrics.precision,
                row.metrics.recall, row.metrics.f1, row.metrics.miou, row.coverage,
                row.n_regions);
  }
  write_json_file(arr, fs::path(rc.out) / "ablate.json");
  write_run_config(rc, fs::path(rc.out) / "config.json");
}

void cmd_regionmix(const CommonOpts& common, int samples, CLI::Option* o_samples,
                   const std::string& mode, CLI::Option* o_mode) {
  RunConfig rc = common.resolve();
  if (o_samples->count()) rc.mix.samples_per_image = samples;
  if (o_mode->count()) rc.mix_mode = mode;
  if (rc.mix_mode != "regionmix" && rc.mix_mode != "binary")
    throw ConfigError("--mode expects regionmix or binary");
  if (rc.input.empty()) throw ConfigError("regionmix requires --input");
  if (rc.mask.empty()) throw ConfigError("regionmix requires --mask");
  fs::create_directories(rc.out);
  const Image img = load_image(rc.input);
  const BinaryMask gt = load_mask(rc.mask);

  const PipelineArtifacts a = run_pipeline(img, rc, effective_threads(rc));
  const auto labeled = label_regions(a.regions, gt, rc.mix);

  nlohmann::json labels = nlohmann::json::array();
  for (const auto& lr : labeled) {
    const char* name = lr.label == RegionLabel::Blade        ? "blade"
                       : lr.label == RegionLabel::Background ? "background"
                                                             : "ambiguous";
    labels.push_back({{"id", lr.id}, {"label", name}, {"purity", lr.purity}});
  }
  write_json_file(labels, fs::path(rc.out) / "labels.json");

  fs::path manifest;
  if (rc.mix_mode == "regionmix") {
    const auto samples_vec = synth_mix_batch(a.regions, gt, rc.mix);
    manifest = export_mix_dataset(rc.input, samples_vec, rc.out);
  } else {
    manifest = export_binary_dataset(rc.input, a.regions, labeled, rc.out);
  }
  write_run_config(rc, fs::path(rc.out) / "config.json");
  std::printf("manifest=%s\n", manifest.string().c_str());
}

void cmd_synth(CLI::App* cmd, const std::string& config_path, SceneSpec& spec,
               const std::string& scene, const std::string& band, const std::string& out) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open " + config_path);
    nlohmann::json j;
    in >> j;
    SceneSpec from_file = scene_spec_from_json(j);
    // flags already parsed into spec; keep file values for options not passed
    auto passed = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (passed("--scene")) from_file.kind = scene_kind_from_string(scene);
    if (passed("--height")) from_file.height = spec.height;
    if (passed("--width")) from_file.width = spec.width;
    if (passed("--split-col")) from_file.split_col = spec.split_col;
    if (passed("--stripe-width")) from_file.stripe_width = spec.stripe_width;
    if (passed("--bg-gradient")) from_file.bg_gradient = spec.bg_gradient;
    if (passed("--noise")) from_file.noise_amplitude = spec.noise_amplitude;
    if (passed("--seed")) from_file.prng_seed = spec.prng_seed;
    spec = from_file;
  } else {
    spec.kind = scene_kind_from_string(scene);
  }
  if (!band.empty()) {
    const auto comma = band.find(',');
    if (comma == std::string::npos) throw ConfigError("--band expects LO,HI");
    spec.band_lo = std::stoi(band.substr(0, comma));
    spec.band_hi = std::stoi(band.substr(comma + 1));
  }
  const Scene sc = make_synthetic(spec);
  const fs::path out_dir = out.empty() ? "out" : out;
  fs::create_directories(out_dir);
  save_image(sc.image, out_dir / "image.png");
  save_mask(sc.mask, out_dir / "mask.png");
  write_json_file(scene_spec_json(spec), out_dir / "config.json");
  std::printf("image=%s mask=%s\n", (out_dir / "image.png").string().c_str(),
              (out_dir / "mask.png").string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MARG segmentation pipeline: dual-threshold region growing with adaptive "
               "thresholds, modular neighborhoods, region merging, and RegionMix exports"};
  app.require_subcommand(1);

  auto* seg = app.add_subcommand("segment", "segment one image end to end");
  CommonOpts seg_opts;
  bool seg_viz = false;
  seg_opts.add_to(seg, false, false);
  seg->add_flag("--viz", seg_viz, "write a color-coded region map PNG");
  seg->callback([&] { cmd_segment(seg_opts, seg_viz); });

  auto* swp = app.add_subcommand("sweep", "adaptive threshold sweep report");
  CommonOpts swp_opts;
  bool swp_csv = false;
  swp_opts.add_to(swp, false, false);
  swp->add_flag("--csv", swp_csv, "also write per-phase CSV curves");
  swp->callback([&] { cmd_sweep(swp_opts, swp_csv); });

  auto* mrg = app.add_subcommand("merge", "merge chained regions");
  CommonOpts mrg_opts;
  std::string mrg_map;
  mrg_opts.add_to(mrg, false, false);
  mrg->add_option("--map", mrg_map, "existing region map PNG (with sidecar manifest) to merge");
  mrg->callback([&] { cmd_merge(mrg_opts, mrg_map); });

  auto* evl = app.add_subcommand("eval", "score a segmentation against ground truth");
  CommonOpts evl_opts;
  bool evl_overlay = false;
  evl_opts.add_to(evl, true, true);
  evl->add_flag("--overlay", evl_overlay, "write the predicted boundary over the input");
  evl->callback([&] { cmd_eval(evl_opts, evl_overlay); });

  auto* abl = app.add_subcommand("ablate", "run the five-variant ablation table");
  CommonOpts abl_opts;
  abl_opts.add_to(abl, true, false);
  abl->callback([&] { cmd_ablate(abl_opts); });

  auto* mix = app.add_subcommand("regionmix", "export a training dataset of region masks");
  CommonOpts mix_opts;
  int mix_samples = 0;
  std::string mix_mode;
  mix_opts.add_to(mix, true, false);
  auto* o_samples = mix->add_option("--samples", mix_samples, "composite samples to draw");
  auto* o_mode = mix->add_option("--mode", mix_mode, "regionmix or binary");
  mix->callback([&] { cmd_regionmix(mix_opts, mix_samples, o_samples, mix_mode, o_mode); });

  auto* syn = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
  SceneSpec syn_spec;
  std::string syn_scene = "flat", syn_band, syn_out, syn_config;
  syn->add_option("--scene", syn_scene, "flat, split, stripe, or wrap");
  syn->add_option("--height", syn_spec.height, "scene height");
  syn->add_option("--width", syn_spec.width, "scene width");
  syn->add_option("--split-col", syn_spec.split_col, "first foreground column (split)");
  syn->add_option("--stripe-width", syn_spec.stripe_width, "diagonal stripe width");
  syn->add_flag("--bg-gradient", syn_spec.bg_gradient, "horizontal ramp background (stripe)");
  syn->add_option("--band", syn_band, "foreground columns LO,HI (wrap)");
  syn->add_option("--noise", syn_spec.noise_amplitude, "uniform noise amplitude");
  syn->add_option("--seed", syn_spec.prng_seed, "PRNG seed for noise");
  syn->add_option("--config,-c", syn_config, "scene spec JSON; flags override");
  syn->add_option("--out,-o", syn_out, "output directory (default: out)");
  syn->callback([&] { cmd_synth(syn, syn_config, syn_spec, syn_scene, syn_band, syn_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
