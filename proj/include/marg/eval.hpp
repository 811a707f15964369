#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "marg/adapt.hpp"
#include "marg/grow.hpp"
#include "marg/image.hpp"
#include "marg/merge.hpp"

namespace marg {

enum class SimMetric { Accuracy, Precision, Recall, F1, IoU };

std::string to_string(SimMetric m);
SimMetric sim_metric_from_string(const std::string& s);  // throws ConfigError

struct RegionScore {
  std::uint32_t id = 0;
  double sim = 0.0;
  int cls = 0;  // 0 background, 1 foreground
};

struct SimReport {
  std::vector<RegionScore> per_region;
  double image_score = 0.0;  // size-weighted mean over H*W
  double coverage = 0.0;
  int n_regions = 0;
};

struct PixelMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double miou = 0.0;  // mean of foreground and background IoU
};

// Scores the region under both constant predictions (all-foreground vs
// all-background) against the ground truth restricted to the region, and
// returns the better one; ties go to class 0. A 0/0 metric denominator scores
// 1 when the region is single-class and 0 otherwise.
std::pair<double, int> region_sim(const Region& r, const BinaryMask& gt, SimMetric metric);
// Same, from the raw counts: n = |R|, f = |R ∩ M|.
std::pair<double, int> region_sim_counts(std::uint64_t f, std::uint64_t n, SimMetric metric);

// image_score = sum(|Ri| * sim_i) / (H*W); uncovered pixels dilute the score.
SimReport image_sim(const RegionSet& rs, const BinaryMask& gt, SimMetric metric);
SimReport image_sim(const RegionMap& rm, const BinaryMask& gt, SimMetric metric);

// Global confusion metrics of a predicted mask. Empty-denominator
// conventions: precision/recall/f1 go to 0, IoU of a class absent from both
// masks is 1.
PixelMetrics pixel_metrics(const BinaryMask& pred, const BinaryMask& gt);

// Perfect-classifier composition: each region takes its majority ground-truth
// class (ties to background), overlaps are resolved and holes filled, and the
// resulting mask is scored against the ground truth.
std::pair<BinaryMask, PixelMetrics> oracle_mask(const RegionSet& rs, const BinaryMask& gt,
                                                const Image& img);

enum class Variant { RSRG, DTRG_GT, DTRG_AT, DTMRG_AT, MARG };

std::string variant_name(Variant v);  // "RSRG", "DTRG+GT", "DTRG+AT", "DTMRG+AT", "MARG"

struct AblateRow {
  Variant variant = Variant::MARG;
  PixelMetrics metrics;
  double coverage = 0.0;
  int n_regions = 0;
};

struct AblateOptions {
  GrowConfig base;      // thresholds double as the fixed taus of RSRG / DTRG+GT
  SweepSpec sweep = SweepSpec::defaults();
  MergeConfig merge;
  int n_threads = 1;
  std::vector<Variant> variants = {Variant::RSRG, Variant::DTRG_GT, Variant::DTRG_AT,
                                   Variant::DTMRG_AT, Variant::MARG};
};

// One row per variant: oracle_mask metrics, coverage, region count.
std::vector<AblateRow> ablate(const Image& img, const BinaryMask& gt, const AblateOptions& opt);

}  // namespace marg
