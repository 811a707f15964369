#include "marg/merge.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "marg/errors.hpp"

namespace marg {

MergeMatrix mergeability(const RegionSet& rs, const MergeConfig& cfg) {
  if (cfg.overlap_threshold <= 0.0 || cfg.overlap_threshold > 1.0)
    throw ConfigError("overlap threshold must be in (0,1]");
  const int n = static_cast<int>(rs.regions.size());
  MergeMatrix m;
  m.n = n;
  m.bits.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m.bits[static_cast<std::size_t>(i) * n + i] = 1;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto inter = PixelSet::intersection_count(rs.regions[i].pixels, rs.regions[j].pixels);
      const auto smaller = std::min(rs.regions[i].pixels.size(), rs.regions[j].pixels.size());
      if (smaller == 0) continue;
      if (static_cast<double>(inter) / static_cast<double>(smaller) >= cfg.overlap_threshold) {
        m.bits[static_cast<std::size_t>(i) * n + j] = 1;
        m.bits[static_cast<std::size_t>(j) * n + i] = 1;
      }
    }
  }
  return m;
}

std::vector<std::vector<int>> merge_components(const MergeMatrix& m) {
  std::vector<std::vector<int>> components;
  std::vector<std::uint8_t> visited(m.n, 0);
  std::vector<int> stack;
  for (int start = 0; start < m.n; ++start) {
    if (visited[start]) continue;
    std::vector<int> component;
    stack.assign(1, start);
    visited[start] = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      component.push_back(i);
      for (int j = 0; j < m.n; ++j) {
        if (!visited[j] && m.at(i, j)) {
          visited[j] = 1;
          stack.push_back(j);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

RegionSet merge_chains(const RegionSet& rs, const MergeMatrix& m) {
  const int n = static_cast<int>(rs.regions.size());
  if (m.n != n) throw ConfigError("mergeability matrix size does not match region count");

  RegionSet out;
  out.height = rs.height;
  out.width = rs.width;
  out.covered = rs.covered;
  out.config = rs.config;

  for (const std::vector<int>& component : merge_components(m)) {
    const Region* largest = &rs.regions[component.front()];
    Region merged;
    merged.id = std::numeric_limits<std::uint32_t>::max();
    merged.pixels = PixelSet(rs.height, rs.width);
    for (int i : component) {
      const Region& r = rs.regions[i];
      merged.id = std::min(merged.id, r.id);
      merged.pixels.unite(r.pixels);
      if (r.pixels.size() > largest->pixels.size() ||
          (r.pixels.size() == largest->pixels.size() && r.id < largest->id))
        largest = &r;
    }
    merged.seed = largest->seed;
    merged.seed_color = largest->seed_color;
    out.regions.push_back(std::move(merged));
  }
  std::sort(out.regions.begin(), out.regions.end(),
            [](const Region& a, const Region& b) { return a.id < b.id; });
  return out;
}

RegionMap resolve_overlaps(const RegionSet& rs, const Image& img) {
  RegionMap out(rs.height, rs.width);
  if (rs.regions.empty()) return out;

  std::vector<const Region*> order;
  order.reserve(rs.regions.size());
  for (const Region& r : rs.regions) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const Region* a, const Region* b) { return a->id < b->id; });

  std::vector<int> best(static_cast<std::size_t>(rs.height) * rs.width,
                        std::numeric_limits<int>::max());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::uint32_t new_id = static_cast<std::uint32_t>(k + 1);
    const Rgb seed_color = order[k]->seed_color;
    order[k]->pixels.for_each([&](int idx) {
      const std::size_t i = static_cast<std::size_t>(idx) * 3;
      const Rgb c{img.data[i], img.data[i + 1], img.data[i + 2]};
      const int d = color_distance_sum3(seed_color, c);
      // Strict improvement only: ascending-id iteration keeps the smaller id
      // on ties.
      if (d < best[idx]) {
        best[idx] = d;
        out.ids[idx] = new_id;
      }
    });
  }
  return out;
}

RegionMap fill_holes(const RegionMap& rm) {
  const int H = rm.height, W = rm.width;
  RegionMap out = rm;

  std::vector<int> frontier;
  for (std::size_t i = 0; i < out.ids.size(); ++i)
    if (out.ids[i] != 0) frontier.push_back(static_cast<int>(i));
  if (frontier.empty() || frontier.size() == out.ids.size()) return out;

  // Layered expansion: a hole pixel adopted at layer d+1 keeps the minimum id
  // over all its layer-d neighbors, which equals nearest-assigned-pixel
  // assignment under Chebyshev distance with ties to the smaller id.
  std::vector<int> dist(out.ids.size(), -1);
  for (int idx : frontier) dist[idx] = 0;
  std::vector<int> next;
  int d = 0;
  while (!frontier.empty()) {
    next.clear();
    for (int idx : frontier) {
      const int h = idx / W, w = idx % W;
      for (int dh = -1; dh <= 1; ++dh) {
        for (int dw = -1; dw <= 1; ++dw) {
          if (dh == 0 && dw == 0) continue;
          const int nh = h + dh, nw = w + dw;
          if (nh < 0 || nh >= H || nw < 0 || nw >= W) continue;
          const int nidx = nh * W + nw;
          if (dist[nidx] == -1) {
            dist[nidx] = d + 1;
            out.ids[nidx] = out.ids[idx];
            next.push_back(nidx);
          } else if (dist[nidx] == d + 1 && out.ids[idx] < out.ids[nidx]) {
            out.ids[nidx] = out.ids[idx];
          }
        }
      }
    }
    frontier.swap(next);
    ++d;
  }
  return out;
}

}  // namespace marg
