#include <doctest.h>

#include <algorithm>
#include <set>

#include "marg/errors.hpp"
#include "marg/topology.hpp"
#include "oracles.hpp"

using namespace marg;

namespace {

std::set<std::pair<int, int>> as_set(const std::vector<Coord>& v) {
  std::set<std::pair<int, int>> out;
  for (Coord c : v) out.insert({c.h, c.w});
  return out;
}

}  // namespace

TEST_CASE("cartesian corner clips to three neighbors in offset order") {
  const auto n = neighbors({0, 0}, {1, Topology::Cartesian}, 4, 4);
  REQUIRE(n.size() == 3);
  CHECK(n[0] == Coord{0, 1});
  CHECK(n[1] == Coord{1, 0});
  CHECK(n[2] == Coord{1, 1});
}

TEST_CASE("modular corner wraps to eight neighbors") {
  const auto n = neighbors({0, 0}, {1, Topology::Modular}, 4, 4);
  REQUIRE(n.size() == 8);
  const auto s = as_set(n);
  CHECK(s.count({3, 3}));
  CHECK(s.count({3, 0}));
  CHECK(s.count({0, 3}));
  // row-major offset order: (-1,-1) first, (1,1) last
  CHECK(n.front() == Coord{3, 3});
  CHECK(n.back() == Coord{1, 1});
}

TEST_CASE("modular dedup on a 1x4 strip") {
  const auto n = neighbors({0, 0}, {1, Topology::Modular}, 1, 4);
  CHECK(as_set(n) == std::set<std::pair<int, int>>{{0, 1}, {0, 3}});
}

TEST_CASE("window sizes: interior, clipped corner, wrapped dedup") {
  CHECK(window_coords({4, 4}, 2, Topology::Cartesian, 9, 9).size() == 25);
  CHECK(window_coords({0, 0}, 2, Topology::Cartesian, 8, 8).size() == 9);
  CHECK(window_coords({0, 0}, 2, Topology::Modular, 4, 4).size() == 16);
}

TEST_CASE("window includes the center, neighbors excludes it") {
  const auto w = as_set(window_coords({2, 2}, 2, Topology::Modular, 8, 8));
  CHECK(w.count({2, 2}));
  const auto n = as_set(neighbors({2, 2}, {2, Topology::Modular}, 8, 8));
  CHECK(!n.count({2, 2}));
  CHECK(w.size() == n.size() + 1);
}

TEST_CASE("neighbor sets match direct offset enumeration") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int H = 1 + static_cast<int>(rng.next_below(7));
    const int W = 1 + static_cast<int>(rng.next_below(7));
    const int k = 1 + static_cast<int>(rng.next_below(3));
    const Coord c{static_cast<int>(rng.next_below(H)), static_cast<int>(rng.next_below(W))};
    for (Topology topo : {Topology::Cartesian, Topology::Modular}) {
      CAPTURE(H);
      CAPTURE(W);
      CAPTURE(k);
      CAPTURE(c.h);
      CAPTURE(c.w);
      const auto got = neighbors(c, {k, topo}, H, W);
      CHECK(as_set(got) == testoracle::neighbor_set(c, k, topo, H, W, false));
      CHECK(got.size() == as_set(got).size());  // no duplicates survive
      const auto win = window_coords(c, k, topo, H, W);
      CHECK(as_set(win) == testoracle::neighbor_set(c, k, topo, H, W, true));
    }
  }
}

TEST_CASE("modular neighbor count is (2k+1)^2-1 on large enough images") {
  for (int k = 1; k <= 3; ++k)
    CHECK(neighbors({0, 0}, {k, Topology::Modular}, 2 * k + 1, 2 * k + 1).size() ==
          static_cast<std::size_t>((2 * k + 1) * (2 * k + 1) - 1));
}

TEST_CASE("neighbor relation is symmetric") {
  Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const int H = 2 + static_cast<int>(rng.next_below(6));
    const int W = 2 + static_cast<int>(rng.next_below(6));
    for (Topology topo : {Topology::Cartesian, Topology::Modular}) {
      for (int h = 0; h < H; ++h) {
        for (int w = 0; w < W; ++w) {
          for (Coord nb : neighbors({h, w}, {1, topo}, H, W)) {
            const auto back = as_set(neighbors(nb, {1, topo}, H, W));
            CHECK(back.count({h, w}));
          }
        }
      }
    }
  }
}

TEST_CASE("cartesian and modular agree away from borders") {
  const int H = 10, W = 12, k = 2;
  for (int h = k; h < H - k; ++h)
    for (int w = k; w < W - k; ++w)
      CHECK(neighbors({h, w}, {k, Topology::Cartesian}, H, W) ==
            neighbors({h, w}, {k, Topology::Modular}, H, W));
}

TEST_CASE("k=1 fast path matches the general enumeration") {
  Rng rng(43);
  std::array<Coord, 8> buf;
  for (int trial = 0; trial < 300; ++trial) {
    const int H = 1 + static_cast<int>(rng.next_below(6));
    const int W = 1 + static_cast<int>(rng.next_below(6));
    const Coord c{static_cast<int>(rng.next_below(H)), static_cast<int>(rng.next_below(W))};
    for (Topology topo : {Topology::Cartesian, Topology::Modular}) {
      const auto expect = neighbors(c, {1, topo}, H, W);
      const int n = neighbors_k1(c, topo, H, W, buf);
      REQUIRE(static_cast<std::size_t>(n) == expect.size());
      for (int i = 0; i < n; ++i) CHECK(buf[i] == expect[i]);
    }
  }
}

TEST_CASE("topology names round-trip") {
  CHECK(to_string(Topology::Cartesian) == "cartesian");
  CHECK(to_string(Topology::Modular) == "modular");
  CHECK(topology_from_string("cartesian") == Topology::Cartesian);
  CHECK(topology_from_string("modular") == Topology::Modular);
  CHECK_THROWS_AS(topology_from_string("toroidal"), ConfigError);
}
