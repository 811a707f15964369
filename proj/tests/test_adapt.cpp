#include <doctest.h>

#include "marg/adapt.hpp"
#include "marg/errors.hpp"
#include "marg/synthetic.hpp"
#include "oracles.hpp"

using namespace marg;

namespace {

std::vector<SweepPoint> curve(std::initializer_list<double> coverages) {
  std::vector<SweepPoint> pts;
  int tau = 2;
  for (double c : coverages) {
    pts.push_back({tau, c, 0});
    tau += 2;
  }
  return pts;
}

}  // namespace

TEST_CASE("coverage arithmetic") {
  RegionSet rs;
  rs.height = 64;
  rs.width = 64;
  rs.covered = BinaryMask(64, 64);
  CHECK(coverage(rs) == 0.0);
  for (int i = 0; i < 2048; ++i) rs.covered.bits[i] = 1;
  CHECK(coverage(rs) == 0.5);
  for (auto& b : rs.covered.bits) b = 1;
  CHECK(coverage(rs) == 1.0);
}

TEST_CASE("plateau detection on synthetic curves") {
  // flat from the start: stop at index = window, choose index 0
  auto flat = curve({1.0, 1.0, 1.0, 1.0});
  auto stop = plateau_stop_index(flat, 0.005, 2);
  REQUIRE(stop.has_value());
  CHECK(*stop == 2);

  // rising then flat: the plateau begins after the rise
  auto rise = curve({0.2, 0.5, 0.9, 0.9, 0.9, 0.9});
  stop = plateau_stop_index(rise, 0.005, 2);
  REQUIRE(stop.has_value());
  CHECK(*stop == 4);
  CHECK(rise[*stop - 2].tau == 6);  // plateau window starts at the 0.9 landing

  // strictly rising: no plateau
  CHECK(!plateau_stop_index(curve({0.1, 0.3, 0.5, 0.7, 0.9}), 0.005, 2).has_value());

  // a dip then recovery within eps still counts as flat
  auto dip = curve({0.9, 0.899, 0.9, 0.9});
  stop = plateau_stop_index(dip, 0.005, 2);
  REQUIRE(stop.has_value());
  CHECK(*stop == 2);

  // cumulative rule: two sub-eps steps that add up to >= eps are not flat
  auto creep = curve({0.5, 0.504, 0.508, 0.512, 0.516});
  CHECK(!plateau_stop_index(creep, 0.005, 2).has_value());
}

TEST_CASE("plateau soundness: coverage never rises eps past the chosen point") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SweepPoint> pts;
    double c = 0.0;
    const int len = 3 + static_cast<int>(rng.next_below(20));
    for (int i = 0; i < len; ++i) {
      c = std::min(1.0, c + static_cast<double>(rng.next_below(100)) / 400.0);
      pts.push_back({2 * (i + 1), c, 0});
    }
    const int window = 1 + static_cast<int>(rng.next_below(3));
    const double eps = 0.01;
    const auto stop = plateau_stop_index(pts, eps, window);
    if (!stop) continue;
    const std::size_t chosen = *stop - window;
    for (std::size_t k = chosen; k <= *stop; ++k)
      CHECK(pts[k].coverage - pts[chosen].coverage < eps);
  }
}

TEST_CASE("flat image converges at the first grid value in both phases") {
  const Image img = Image::filled(24, 24, {99, 99, 99});
  GrowConfig base;
  const SweepReport rep = adaptive_thresholds(img, base, SweepSpec::defaults());
  CHECK(rep.chosen.tau_s == 2);
  CHECK(rep.chosen.tau_l == 2);
  CHECK(rep.seed_converged);
  CHECK(rep.local_converged);
  REQUIRE(rep.seed_sweep.size() == 3);  // evaluated prefix: plateau window + 1
  for (const SweepPoint& p : rep.seed_sweep) CHECK(p.coverage == 1.0);
  CHECK(rep.seed_sweep[0].tau == 2);
  CHECK(rep.seed_sweep[2].tau == 6);
}

TEST_CASE("sweep points match independently recomputed segmentations") {
  SceneSpec spec;
  spec.kind = SceneKind::TwoToneSplit;
  spec.height = 16;
  spec.width = 16;
  spec.split_col = 8;
  const Scene sc = make_synthetic(spec);
  GrowConfig base;
  base.seed_grid = 4;
  SweepSpec sweep = SweepSpec::defaults();
  const SweepReport rep = adaptive_thresholds(sc.image, base, sweep);

  for (const SweepPoint& p : rep.seed_sweep) {
    GrowConfig cfg = base;
    cfg.thresholds = {sweep.tau_l_during_s_sweep, p.tau};
    const RegionSet rs = segment(sc.image, cfg);
    CHECK(p.coverage == coverage(rs));
    CHECK(p.n_regions == static_cast<int>(rs.regions.size()));
  }
  for (const SweepPoint& p : rep.local_sweep) {
    GrowConfig cfg = base;
    cfg.thresholds = {p.tau, rep.chosen.tau_s};
    const RegionSet rs = segment(sc.image, cfg);
    CHECK(p.coverage == coverage(rs));
    CHECK(p.n_regions == static_cast<int>(rs.regions.size()));
  }
}

TEST_CASE("two-tone image settles below the inter-class distance") {
  SceneSpec spec;
  spec.kind = SceneKind::TwoToneSplit;
  spec.height = 16;
  spec.width = 16;
  spec.split_col = 8;
  spec.bg = {100, 100, 100};
  spec.fg = {200, 200, 200};
  const Scene sc = make_synthetic(spec);
  GrowConfig base;
  base.seed_grid = 4;
  base.topology = Topology::Cartesian;
  const SweepReport rep = adaptive_thresholds(sc.image, base, SweepSpec::defaults());
  CHECK(rep.chosen.tau_s < 100);
  GrowConfig cfg = base;
  cfg.thresholds = rep.chosen;
  const RegionSet rs = segment(sc.image, cfg);
  CHECK(coverage(rs) == 1.0);
  for (const Region& r : rs.regions) {
    // no region crosses the split
    bool left = false, right = false;
    r.pixels.for_each([&](int idx) { (idx % 16 < 8 ? left : right) = true; });
    CHECK(!(left && right));
  }
}

TEST_CASE("three-gray image keeps the classes separate") {
  Image img(12, 12);
  for (int h = 0; h < 12; ++h) {
    for (int w = 0; w < 12; ++w) {
      const std::uint8_t v = w < 4 ? 0 : w < 8 ? 100 : 200;
      img.set(h, w, {v, v, v});
    }
  }
  GrowConfig base;
  base.seed_grid = 6;
  base.topology = Topology::Cartesian;
  const SweepReport rep = adaptive_thresholds(img, base, SweepSpec::defaults());
  CHECK(rep.chosen.tau_s < 100);
  GrowConfig cfg = base;
  cfg.thresholds = rep.chosen;
  for (const Region& r : segment(img, cfg).regions) {
    const Rgb c = r.seed_color;
    r.pixels.for_each([&](int idx) {
      CHECK(img.at(idx / 12, idx % 12) == c);  // regions stay single-tone
    });
  }
}

TEST_CASE("non-convergence falls back to the last grid value with a flag") {
  const Image img = Image::filled(8, 8, {10, 10, 10});
  SweepSpec spec = SweepSpec::defaults();
  spec.tau_s_grid = {4};  // shorter than plateau_window + 1, cannot converge
  const SweepReport rep = adaptive_thresholds(img, GrowConfig{}, spec);
  CHECK(!rep.seed_converged);
  CHECK(rep.chosen.tau_s == 4);
  CHECK(rep.local_converged);  // tau_l grid is long enough to plateau
}

TEST_CASE("parallel sweep output is identical to serial") {
  Rng rng(808);
  for (int trial = 0; trial < 6; ++trial) {
    Image img = testoracle::random_blocky(rng, 20, 20, 4, 5);
    GrowConfig base;
    base.seed_grid = 5;
    base.topology = trial % 2 ? Topology::Modular : Topology::Cartesian;
    const SweepReport serial = adaptive_thresholds(img, base, SweepSpec::defaults(), 1);
    for (int threads : {2, 3, 7}) {
      CAPTURE(trial);
      CAPTURE(threads);
      CHECK(adaptive_thresholds(img, base, SweepSpec::defaults(), threads) == serial);
    }
  }
}

TEST_CASE("sweep report json round-trips") {
  SweepReport rep;
  rep.seed_sweep = {{2, 0.25, 3}, {4, 0.75, 5}, {6, 0.75, 5}, {8, 0.75, 4}};
  rep.local_sweep = {{2, 0.9, 4}, {4, 1.0, 4}};
  rep.chosen = {4, 6};
  rep.seed_converged = true;
  rep.local_converged = false;
  CHECK(sweep_report_from_json(sweep_report_json(rep)) == rep);
}

TEST_CASE("sweep spec validation") {
  const Image img = Image::filled(4, 4, {1, 1, 1});
  SweepSpec empty;
  CHECK_THROWS_AS(adaptive_thresholds(img, GrowConfig{}, empty), ConfigError);

  SweepSpec unsorted = SweepSpec::defaults();
  unsorted.tau_s_grid = {4, 2};
  CHECK_THROWS_AS(adaptive_thresholds(img, GrowConfig{}, unsorted), ConfigError);

  SweepSpec dup = SweepSpec::defaults();
  dup.tau_l_grid = {2, 2, 4};
  CHECK_THROWS_AS(adaptive_thresholds(img, GrowConfig{}, dup), ConfigError);

  SweepSpec bad_eps = SweepSpec::defaults();
  bad_eps.plateau_eps = 0.0;
  CHECK_THROWS_AS(adaptive_thresholds(img, GrowConfig{}, bad_eps), ConfigError);

  SweepSpec bad_window = SweepSpec::defaults();
  bad_window.plateau_window = 0;
  CHECK_THROWS_AS(adaptive_thresholds(img, GrowConfig{}, bad_window), ConfigError);
}
