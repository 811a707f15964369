#pragma once

#include <cstdint>
#include <vector>

#include "marg/grow.hpp"
#include "marg/image.hpp"

namespace marg {

struct MergeConfig {
  double overlap_threshold = 0.1;  // valid (0,1]; stable range 0.08..0.32
};

// Symmetric mergeability relation; diagonal true by convention.
struct MergeMatrix {
  int n = 0;
  std::vector<std::uint8_t> bits;  // n*n

  bool at(int i, int j) const { return bits[static_cast<std::size_t>(i) * n + j] != 0; }
};

// bits[i][j] = |Ri ∩ Rj| / min(|Ri|,|Rj|) >= overlap_threshold, on exact
// pixel counts.
MergeMatrix mergeability(const RegionSet& rs, const MergeConfig& cfg);

// Connected components of the mergeability graph via DFS from ascending
// start indices; each component is reported with its member indices sorted.
std::vector<std::vector<int>> merge_components(const MergeMatrix& m);

// Replaces each connected component of the mergeability graph (found by DFS)
// with one region: pixels = union, id = smallest member id, seed and
// seed_color from the largest member (ties broken by smaller id). Output is
// ordered by id; ids may be non-contiguous after merging. Covered mask is
// unchanged.
RegionSet merge_chains(const RegionSet& rs, const MergeMatrix& m);

// Projects a RegionSet to single assignment: every covered pixel goes to the
// containing region whose seed_color is nearest to the pixel's color, ties to
// the smaller region id. Regions are relabeled 1..N in ascending-id order so
// the map's id range is contiguous. Uncovered pixels stay 0.
RegionMap resolve_overlaps(const RegionSet& rs, const Image& img);

// Multi-source BFS (8-connectivity, Cartesian) from all assigned pixels; each
// zero pixel takes the id of its nearest assigned pixel, ties to the smaller
// id. Assigned pixels never change. An all-zero map is returned unchanged.
RegionMap fill_holes(const RegionMap& rm);

}  // namespace marg
