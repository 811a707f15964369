#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "marg/image.hpp"
#include "marg/rng.hpp"
#include "marg/topology.hpp"

namespace marg {

struct ThresholdPair {
  int tau_l = 10;
  int tau_s = 10;
  bool operator==(const ThresholdPair&) const = default;
};

enum class SeedStrategy { GridPromotion, Random };

struct GrowConfig {
  ThresholdPair thresholds;
  Topology topology = Topology::Modular;
  int seed_grid = 32;          // candidate count per axis
  int seed_window_k = 2;       // overlap-avoidance window radius, valid 2..6
  double edge_fraction = 0.25; // edge binarization cutoff fed to sobel_edges
  int max_displacement_steps = 20;
  std::uint64_t prng_seed = 0;
  SeedStrategy seed_strategy = SeedStrategy::GridPromotion;
  int random_seed_count = 64;  // Random strategy draw budget

  bool operator==(const GrowConfig&) const = default;
};

struct Region {
  std::uint32_t id = 0;
  Coord seed;
  Rgb seed_color;
  PixelSet pixels;
};

// Regions may overlap; covered is their union.
struct RegionSet {
  std::vector<Region> regions;
  BinaryMask covered;
  int height = 0;
  int width = 0;
  GrowConfig config;
};

// Sum of absolute channel differences, range [0,765]. The color distance
// proper is the per-channel mean sum3/3; threshold tests compare
// sum3 <= 3*tau so thirds never round.
int color_distance_sum3(Rgb a, Rgb b);
double color_distance(Rgb a, Rgb b);

// Equidistant candidate seeds: (round((i+0.5)H/n), round((j+0.5)W/n)) for
// i,j in [0,n), row-major, clamped in-bounds. Half-fractions round down so
// a saturated grid (n = H = W) hits every pixel exactly once.
std::vector<Coord> candidate_grid(int H, int W, int n_per_axis);

// Overlap avoidance then edge-guided displacement. Rejects when the
// seed_window_k window around the candidate touches covered pixels; while the
// candidate sits on an edge it steps in a uniformly random 8-direction (one
// PRNG draw per step, wrapping under Modular, rejected on Cartesian exit) up
// to max_displacement_steps; still-on-edge rejects, and the window test is
// re-applied at the final position.
std::optional<Coord> promote_seed(Coord c, const BinaryMask& covered, const EdgeMap& edges,
                                  const GrowConfig& cfg, Rng& rng);

// BFS over k=1 neighbors: a candidate adjacent to frontier pixel p joins iff
// color_distance(p, candidate) <= tau_l and
// color_distance(seed_color, candidate) <= tau_s.
// Membership in other regions does not block growth.
Region grow_region(const Image& img, Coord seed, ThresholdPair tp, Topology topology);

RegionSet segment(const Image& img, const GrowConfig& cfg);
// Same result with a precomputed edge map; the threshold sweep reuses one
// across grid points.
RegionSet segment_with_edges(const Image& img, const GrowConfig& cfg, const EdgeMap& edges);

void validate(const GrowConfig& cfg);  // throws ConfigError

}  // namespace marg
