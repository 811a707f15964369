#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "marg/grow.hpp"

namespace marg {

struct SweepPoint {
  int tau = 0;
  double coverage = 0.0;
  int n_regions = 0;
  bool operator==(const SweepPoint&) const = default;
};

struct SweepSpec {
  std::vector<int> tau_s_grid;  // strictly ascending
  std::vector<int> tau_l_grid;
  double plateau_eps = 0.005;
  int plateau_window = 2;        // consecutive steps with no material gain
  int tau_l_during_s_sweep = 10; // tau_l held here while tau_s varies

  static SweepSpec defaults();  // grids 2,4,...,80
};

struct SweepReport {
  std::vector<SweepPoint> seed_sweep;   // phase 1, tau_s varying
  std::vector<SweepPoint> local_sweep;  // phase 2, tau_l varying
  ThresholdPair chosen;
  bool seed_converged = true;   // false = no plateau, fell back to last grid value
  bool local_converged = true;

  bool operator==(const SweepReport&) const = default;
};

// Covered fraction |X_c| / (H*W).
double coverage(const RegionSet& rs);

// First index i >= window such that every point in the trailing window gained
// less than eps over the point at i-window. The chosen threshold is the one
// at i-window (the start of the plateau), so coverage never rises by eps or
// more past the chosen value within the evaluated prefix.
std::optional<std::size_t> plateau_stop_index(const std::vector<SweepPoint>& points, double eps,
                                              int window);

// Two-phase adaptive threshold selection. Phase 1 sweeps tau_s (tau_l held at
// spec.tau_l_during_s_sweep) until the coverage plateau; phase 2 sweeps tau_l
// with the chosen tau_s. Reports contain exactly the evaluated prefix of each
// grid. n_threads > 1 evaluates grid points concurrently in chunks; results
// are identical to the serial path.
SweepReport adaptive_thresholds(const Image& img, const GrowConfig& base, const SweepSpec& spec,
                                int n_threads = 1);

nlohmann::json sweep_report_json(const SweepReport& report);
SweepReport sweep_report_from_json(const nlohmann::json& j);

}  // namespace marg
