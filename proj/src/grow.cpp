#include "marg/grow.hpp"

#include <algorithm>
#include <cstdlib>

#include "marg/errors.hpp"
#include "marg/sobel.hpp"

namespace marg {

int color_distance_sum3(Rgb a, Rgb b) {
  return std::abs(int(a.r) - int(b.r)) + std::abs(int(a.g) - int(b.g)) +
         std::abs(int(a.b) - int(b.b));
}

double color_distance(Rgb a, Rgb b) { return color_distance_sum3(a, b) / 3.0; }

void validate(const GrowConfig& cfg) {
  if (cfg.thresholds.tau_l < 0 || cfg.thresholds.tau_s < 0)
    throw ConfigError("thresholds must be non-negative");
  if (cfg.seed_grid < 1) throw ConfigError("seed grid must be at least 1 per axis");
  if (cfg.seed_window_k < 2 || cfg.seed_window_k > 6)
    throw ConfigError("seed window radius must be in [2,6]");
  if (cfg.edge_fraction <= 0.0 || cfg.edge_fraction > 1.0)
    throw ConfigError("edge fraction must be in (0,1]");
  if (cfg.max_displacement_steps < 0) throw ConfigError("displacement steps must be non-negative");
  if (cfg.seed_strategy == SeedStrategy::Random && cfg.random_seed_count < 1)
    throw ConfigError("random seed count must be at least 1");
}

std::vector<Coord> candidate_grid(int H, int W, int n_per_axis) {
  // Exact round-half-down of (i+0.5)*dim/n: ceil(v - 1/2) in integers.
  auto place = [n_per_axis](int dim, int i) {
    const long long n = n_per_axis;
    const long long v = (2 * (2LL * i + 1) * dim + 2 * n - 1) / (4 * n);
    return std::clamp(static_cast<int>(v), 0, dim - 1);
  };
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis);
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j) out.push_back({place(H, i), place(W, j)});
  return out;
}

std::optional<Coord> promote_seed(Coord c, const BinaryMask& covered, const EdgeMap& edges,
                                  const GrowConfig& cfg, Rng& rng) {
  const int H = covered.height, W = covered.width;
  auto window_overlaps = [&](Coord p) {
    for (Coord q : window_coords(p, cfg.seed_window_k, cfg.topology, H, W))
      if (covered.at(q.h, q.w)) return true;
    return false;
  };
  if (window_overlaps(c)) return std::nullopt;

  static constexpr int kStep[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                      {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  int steps = 0;
  while (edges.at(c.h, c.w) && steps < cfg.max_displacement_steps) {
    const auto& d = kStep[rng.next_below(8)];
    c.h += d[0];
    c.w += d[1];
    if (cfg.topology == Topology::Cartesian) {
      if (c.h < 0 || c.h >= H || c.w < 0 || c.w >= W) return std::nullopt;
    } else {
      c.h = (c.h + H) % H;
      c.w = (c.w + W) % W;
    }
    ++steps;
  }
  if (edges.at(c.h, c.w)) return std::nullopt;
  if (window_overlaps(c)) return std::nullopt;
  return c;
}

Region grow_region(const Image& img, Coord seed, ThresholdPair tp, Topology topology) {
  const int H = img.height, W = img.width;
  Region r;
  r.seed = seed;
  r.seed_color = img.at(seed.h, seed.w);
  r.pixels = PixelSet(H, W);

  const int cap_l = 3 * tp.tau_l;
  const int cap_s = 3 * tp.tau_s;
  std::vector<std::int32_t> queue;
  queue.reserve(256);
  std::vector<std::uint8_t> enqueued(img.n_pixels(), 0);
  const int seed_idx = seed.h * W + seed.w;
  queue.push_back(seed_idx);
  enqueued[seed_idx] = 1;

  std::array<Coord, 8> nb;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int idx = queue[head];
    const Coord cur{idx / W, idx % W};
    r.pixels.set(idx);
    const Rgb cur_color = img.at(cur.h, cur.w);
    const int n = neighbors_k1(cur, topology, H, W, nb);
    for (int t = 0; t < n; ++t) {
      const int nidx = nb[t].h * W + nb[t].w;
      if (enqueued[nidx]) continue;
      const Rgb cand = img.at(nb[t].h, nb[t].w);
      if (color_distance_sum3(cur_color, cand) <= cap_l &&
          color_distance_sum3(r.seed_color, cand) <= cap_s) {
        enqueued[nidx] = 1;
        queue.push_back(nidx);
      }
    }
  }
  return r;
}

RegionSet segment_with_edges(const Image& img, const GrowConfig& cfg, const EdgeMap& edges) {
  validate(cfg);
  const int H = img.height, W = img.width;
  RegionSet rs;
  rs.height = H;
  rs.width = W;
  rs.covered = BinaryMask(H, W);
  rs.config = cfg;
  Rng rng(cfg.prng_seed);

  auto add_region = [&](Coord seed) {
    Region r = grow_region(img, seed, cfg.thresholds, cfg.topology);
    r.id = static_cast<std::uint32_t>(rs.regions.size() + 1);
    r.pixels.for_each([&](int idx) { rs.covered.bits[idx] = 1; });
    rs.regions.push_back(std::move(r));
  };

  if (cfg.seed_strategy == SeedStrategy::GridPromotion) {
    for (Coord c : candidate_grid(H, W, cfg.seed_grid)) {
      if (auto seed = promote_seed(c, rs.covered, edges, cfg, rng)) add_region(*seed);
    }
  } else {
    // Random baseline: no window or edge criteria; a draw landing on an
    // already-covered pixel is skipped rather than regrown.
    for (int i = 0; i < cfg.random_seed_count; ++i) {
      const Coord c{static_cast<int>(rng.next_below(H)), static_cast<int>(rng.next_below(W))};
      if (rs.covered.at(c.h, c.w)) continue;
      add_region(c);
    }
  }
  return rs;
}

RegionSet segment(const Image& img, const GrowConfig& cfg) {
  return segment_with_edges(img, cfg, sobel_edges(img, cfg.edge_fraction));
}

}  // namespace marg
