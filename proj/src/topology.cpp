#include "marg/topology.hpp"

#include <algorithm>

#include "marg/errors.hpp"

namespace marg {

std::string to_string(Topology t) { return t == Topology::Cartesian ? "cartesian" : "modular"; }

Topology topology_from_string(const std::string& s) {
  if (s == "cartesian") return Topology::Cartesian;
  if (s == "modular") return Topology::Modular;
  throw ConfigError("unknown topology: " + s);
}

namespace {

int wrap(int v, int n) {
  v %= n;
  return v < 0 ? v + n : v;
}

std::vector<Coord> enumerate(Coord c, int k, Topology topology, int H, int W,
                             bool include_center) {
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(2 * k + 1) * (2 * k + 1));
  // Wrap duplicates only exist when the window spans a full axis.
  const bool may_dup = topology == Topology::Modular && (2 * k + 1 > H || 2 * k + 1 > W);
  for (int i = -k; i <= k; ++i) {
    for (int j = -k; j <= k; ++j) {
      if (!include_center && i == 0 && j == 0) continue;
      Coord n{c.h + i, c.w + j};
      if (topology == Topology::Cartesian) {
        if (n.h < 0 || n.h >= H || n.w < 0 || n.w >= W) continue;
      } else {
        n.h = wrap(n.h, H);
        n.w = wrap(n.w, W);
        if (!include_center && n == c) continue;
        if (may_dup && std::find(out.begin(), out.end(), n) != out.end()) continue;
      }
      out.push_back(n);
    }
  }
  return out;
}

}  // namespace

std::vector<Coord> neighbors(Coord c, NeighborSpec spec, int H, int W) {
  return enumerate(c, spec.k, spec.topology, H, W, false);
}

std::vector<Coord> window_coords(Coord c, int k, Topology topology, int H, int W) {
  return enumerate(c, k, topology, H, W, true);
}

int neighbors_k1(Coord c, Topology topology, int H, int W, std::array<Coord, 8>& out) {
  int n = 0;
  if (topology == Topology::Cartesian && c.h > 0 && c.h < H - 1 && c.w > 0 && c.w < W - 1) {
    // Interior pixel, no clipping.
    out[0] = {c.h - 1, c.w - 1};
    out[1] = {c.h - 1, c.w};
    out[2] = {c.h - 1, c.w + 1};
    out[3] = {c.h, c.w - 1};
    out[4] = {c.h, c.w + 1};
    out[5] = {c.h + 1, c.w - 1};
    out[6] = {c.h + 1, c.w};
    out[7] = {c.h + 1, c.w + 1};
    return 8;
  }
  const bool may_dup = topology == Topology::Modular && (H < 3 || W < 3);
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      if (i == 0 && j == 0) continue;
      Coord nb{c.h + i, c.w + j};
      if (topology == Topology::Cartesian) {
        if (nb.h < 0 || nb.h >= H || nb.w < 0 || nb.w >= W) continue;
      } else {
        nb.h = wrap(nb.h, H);
        nb.w = wrap(nb.w, W);
        if (nb == c) continue;
        if (may_dup) {
          bool seen = false;
          for (int t = 0; t < n; ++t)
            if (out[t] == nb) {
              seen = true;
              break;
            }
          if (seen) continue;
        }
      }
      out[n++] = nb;
    }
  }
  return n;
}

}  // namespace marg
