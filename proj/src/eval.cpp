#include "marg/eval.hpp"

#include <algorithm>
#include <map>

#include "marg/errors.hpp"

namespace marg {
namespace {

double metric_from_counts(double tp, double fp, double fn, double tn, SimMetric metric,
                          bool single_class) {
  auto ratio = [single_class](double num, double den) {
    return den > 0 ? num / den : (single_class ? 1.0 : 0.0);
  };
  switch (metric) {
    case SimMetric::Accuracy:
      return (tp + tn) / (tp + fp + fn + tn);
    case SimMetric::Precision:
      return ratio(tp, tp + fp);
    case SimMetric::Recall:
      return ratio(tp, tp + fn);
    case SimMetric::F1:
      return ratio(2 * tp, 2 * tp + fp + fn);
    case SimMetric::IoU:
      return ratio(tp, tp + fp + fn);
  }
  return 0.0;
}

std::uint64_t foreground_count(const PixelSet& pixels, const BinaryMask& gt) {
  std::uint64_t f = 0;
  pixels.for_each([&](int idx) { f += gt.bits[idx]; });
  return f;
}

SimReport weighted_report(std::vector<RegionScore> scores, const std::vector<std::uint64_t>& sizes,
                          std::size_t covered, std::size_t total) {
  SimReport rep;
  rep.per_region = std::move(scores);
  rep.n_regions = static_cast<int>(rep.per_region.size());
  rep.coverage = total ? static_cast<double>(covered) / static_cast<double>(total) : 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < rep.per_region.size(); ++i)
    acc += static_cast<double>(sizes[i]) * rep.per_region[i].sim;
  rep.image_score = total ? acc / static_cast<double>(total) : 0.0;
  return rep;
}

}  // namespace

std::string to_string(SimMetric m) {
  switch (m) {
    case SimMetric::Accuracy:
      return "accuracy";
    case SimMetric::Precision:
      return "precision";
    case SimMetric::Recall:
      return "recall";
    case SimMetric::F1:
      return "f1";
    case SimMetric::IoU:
      return "iou";
  }
  return "accuracy";
}

SimMetric sim_metric_from_string(const std::string& s) {
  if (s == "accuracy") return SimMetric::Accuracy;
  if (s == "precision") return SimMetric::Precision;
  if (s == "recall") return SimMetric::Recall;
  if (s == "f1") return SimMetric::F1;
  if (s == "iou") return SimMetric::IoU;
  throw ConfigError("unknown metric: " + s);
}

std::pair<double, int> region_sim_counts(std::uint64_t f, std::uint64_t n, SimMetric metric) {
  const bool single_class = f == 0 || f == n;
  const double ff = static_cast<double>(f), nn = static_cast<double>(n);
  const double fg = metric_from_counts(ff, nn - ff, 0, 0, metric, single_class);
  const double bg = metric_from_counts(0, 0, ff, nn - ff, metric, single_class);
  if (bg >= fg) return {bg, 0};
  return {fg, 1};
}

std::pair<double, int> region_sim(const Region& r, const BinaryMask& gt, SimMetric metric) {
  return region_sim_counts(foreground_count(r.pixels, gt), r.pixels.size(), metric);
}

SimReport image_sim(const RegionSet& rs, const BinaryMask& gt, SimMetric metric) {
  std::vector<RegionScore> scores;
  std::vector<std::uint64_t> sizes;
  for (const Region& r : rs.regions) {
    const auto [sim, cls] = region_sim(r, gt, metric);
    scores.push_back({r.id, sim, cls});
    sizes.push_back(r.pixels.size());
  }
  return weighted_report(std::move(scores), sizes, rs.covered.count(),
                         static_cast<std::size_t>(rs.height) * rs.width);
}

SimReport image_sim(const RegionMap& rm, const BinaryMask& gt, SimMetric metric) {
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> counts;  // id -> (n, f)
  for (std::size_t i = 0; i < rm.ids.size(); ++i) {
    if (rm.ids[i] == 0) continue;
    auto& [n, f] = counts[rm.ids[i]];
    ++n;
    f += gt.bits[i];
  }
  std::vector<RegionScore> scores;
  std::vector<std::uint64_t> sizes;
  std::size_t covered = 0;
  for (const auto& [id, nf] : counts) {
    const auto [sim, cls] = region_sim_counts(nf.second, nf.first, metric);
    scores.push_back({id, sim, cls});
    sizes.push_back(nf.first);
    covered += nf.first;
  }
  return weighted_report(std::move(scores), sizes, covered, rm.ids.size());
}

PixelMetrics pixel_metrics(const BinaryMask& pred, const BinaryMask& gt) {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    if (pred.bits[i] && gt.bits[i])
      ++tp;
    else if (pred.bits[i])
      ++fp;
    else if (gt.bits[i])
      ++fn;
    else
      ++tn;
  }
  PixelMetrics m;
  const double total = tp + fp + fn + tn;
  m.accuracy = total > 0 ? (tp + tn) / total : 0.0;
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = 2 * tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  const double fg_iou = tp + fp + fn > 0 ? tp / (tp + fp + fn) : 1.0;
  const double bg_iou = tn + fp + fn > 0 ? tn / (tn + fp + fn) : 1.0;
  m.miou = (fg_iou + bg_iou) / 2;
  return m;
}

std::pair<BinaryMask, PixelMetrics> oracle_mask(const RegionSet& rs, const BinaryMask& gt,
                                                const Image& img) {
  // Majority class per region, ties to background. Class lookup is by the
  // relabeled map id, which follows ascending original region ids exactly as
  // resolve_overlaps does.
  std::vector<const Region*> order;
  for (const Region& r : rs.regions) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const Region* a, const Region* b) { return a->id < b->id; });
  std::vector<std::uint8_t> cls(order.size() + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::uint64_t f = foreground_count(order[k]->pixels, gt);
    cls[k + 1] = 2 * f > order[k]->pixels.size() ? 1 : 0;
  }

  const RegionMap rm = fill_holes(resolve_overlaps(rs, img));
  BinaryMask pred(rm.height, rm.width);
  for (std::size_t i = 0; i < rm.ids.size(); ++i) pred.bits[i] = cls[rm.ids[i]];
  const PixelMetrics metrics = pixel_metrics(pred, gt);
  return {std::move(pred), metrics};
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::RSRG:
      return "RSRG";
    case Variant::DTRG_GT:
      return "DTRG+GT";
    case Variant::DTRG_AT:
      return "DTRG+AT";
    case Variant::DTMRG_AT:
      return "DTMRG+AT";
    case Variant::MARG:
      return "MARG";
  }
  return "MARG";
}

std::vector<AblateRow> ablate(const Image& img, const BinaryMask& gt, const AblateOptions& opt) {
  std::vector<AblateRow> rows;
  for (Variant v : opt.variants) {
    GrowConfig cfg = opt.base;
    cfg.seed_strategy = v == Variant::RSRG ? SeedStrategy::Random : SeedStrategy::GridPromotion;
    cfg.topology = (v == Variant::DTMRG_AT || v == Variant::MARG) ? Topology::Modular
                                                                  : Topology::Cartesian;
    const bool adaptive = v != Variant::RSRG && v != Variant::DTRG_GT;
    if (adaptive)
      cfg.thresholds = adaptive_thresholds(img, cfg, opt.sweep, opt.n_threads).chosen;

    RegionSet rs = segment(img, cfg);
    if (v == Variant::MARG) rs = merge_chains(rs, mergeability(rs, opt.merge));

    AblateRow row;
    row.variant = v;
    row.metrics = oracle_mask(rs, gt, img).second;
    row.coverage = coverage(rs);
    row.n_regions = static_cast<int>(rs.regions.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace marg
