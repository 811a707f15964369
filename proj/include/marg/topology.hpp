#pragma once

#include <array>
#include <string>
#include <vector>

namespace marg {

enum class Topology { Cartesian, Modular };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);  // throws ConfigError

struct Coord {
  int h = 0;
  int w = 0;
  bool operator==(const Coord&) const = default;
  // Row-major ordering, matches offset enumeration order.
  auto operator<=>(const Coord&) const = default;
};

struct NeighborSpec {
  int k = 1;
  Topology topology = Topology::Cartesian;
};

// All coords reachable from c by offsets (i,j), i,j in [-k,k], (i,j) != (0,0).
// Cartesian drops out-of-range offsets; Modular wraps and deduplicates (the
// center itself can reappear via wrap on tiny images and is excluded).
// Enumeration order is row-major over offsets (i ascending, then j), which
// fixes BFS determinism.
std::vector<Coord> neighbors(Coord c, NeighborSpec spec, int H, int W);

// As neighbors but with the (0,0) offset included; used for seed-promotion
// overlap tests.
std::vector<Coord> window_coords(Coord c, int k, Topology topology, int H, int W);

// k=1 fast path for BFS inner loops. Writes up to 8 coords in the same order
// neighbors() would produce; returns the count.
int neighbors_k1(Coord c, Topology topology, int H, int W, std::array<Coord, 8>& out);

}  // namespace marg
