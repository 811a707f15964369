#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "marg/adapt.hpp"
#include "marg/grow.hpp"
#include "marg/merge.hpp"
#include "marg/sobel.hpp"
#include "marg/synthetic.hpp"

using namespace marg;

namespace {

double best_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-22s %10.2f %10.2f %8.2fx %10s\n", name, serial, parallel,
              serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
  SceneSpec spec;
  spec.kind = SceneKind::DiagonalStripe;
  spec.height = 256;
  spec.width = 256;
  spec.stripe_width = 24;
  spec.bg_gradient = true;
  spec.noise_amplitude = 3;
  spec.prng_seed = 7;
  const Scene sc = make_synthetic(spec);
  const int max_threads = omp_get_max_threads();

  std::printf("scene %dx%d, %d threads available\n\n", spec.height, spec.width, max_threads);
  std::printf("%-22s %10s %10s %9s %10s\n", "kernel", "serial ms", "par ms", "speedup",
              "identical");

  GrowConfig base;
  const SweepSpec sweep = SweepSpec::defaults();

  SweepReport serial_rep, parallel_rep;
  const double sweep_serial =
      best_ms([&] { serial_rep = adaptive_thresholds(sc.image, base, sweep, 1); });
  const double sweep_parallel =
      best_ms([&] { parallel_rep = adaptive_thresholds(sc.image, base, sweep, max_threads); });
  row("threshold sweep", sweep_serial, sweep_parallel, serial_rep == parallel_rep);

  EdgeMap edges_serial, edges_parallel;
  omp_set_num_threads(1);
  const double sobel_serial = best_ms([&] { edges_serial = sobel_edges(sc.image); });
  omp_set_num_threads(max_threads);
  const double sobel_parallel = best_ms([&] { edges_parallel = sobel_edges(sc.image); });
  row("edge detection", sobel_serial, sobel_parallel, edges_serial.bits == edges_parallel.bits);

  base.thresholds = serial_rep.chosen;
  const RegionSet rs = segment(sc.image, base);
  MergeConfig mc;
  MergeMatrix m_serial, m_parallel;
  omp_set_num_threads(1);
  const double merge_serial = best_ms([&] { m_serial = mergeability(rs, mc); });
  omp_set_num_threads(max_threads);
  const double merge_parallel = best_ms([&] { m_parallel = mergeability(rs, mc); });
  row("mergeability matrix", merge_serial, merge_parallel, m_serial.bits == m_parallel.bits);

  const bool all_identical = serial_rep == parallel_rep &&
                             edges_serial.bits == edges_parallel.bits &&
                             m_serial.bits == m_parallel.bits;
  std::printf("\nserial and parallel results %s\n",
              all_identical ? "agree bit for bit" : "DIVERGE");
  return all_identical ? 0 : 1;
}
