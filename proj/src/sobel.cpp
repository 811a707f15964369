#include "marg/sobel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace marg {

EdgeMap sobel_edges(const Image& img, double magnitude_fraction) {
  const int H = img.height, W = img.width;

  std::vector<int> gray(static_cast<std::size_t>(H) * W);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const int sum = img.data[3 * i] + img.data[3 * i + 1] + img.data[3 * i + 2];
    gray[i] = static_cast<int>(std::lround(sum / 3.0));
  }

  // Replication padding: clamp the sampled coordinate to the image.
  auto g = [&](int h, int w) {
    h = std::clamp(h, 0, H - 1);
    w = std::clamp(w, 0, W - 1);
    return gray[static_cast<std::size_t>(h) * W + w];
  };

  std::vector<double> mag(gray.size());
  double max_mag = 0.0;
#pragma omp parallel for reduction(max : max_mag) schedule(static)
  for (int h = 0; h < H; ++h) {
    for (int w = 0; w < W; ++w) {
      const int gx = -g(h - 1, w - 1) + g(h - 1, w + 1) - 2 * g(h, w - 1) + 2 * g(h, w + 1) -
                     g(h + 1, w - 1) + g(h + 1, w + 1);
      const int gy = -g(h - 1, w - 1) - 2 * g(h - 1, w) - g(h - 1, w + 1) + g(h + 1, w - 1) +
                     2 * g(h + 1, w) + g(h + 1, w + 1);
      const double m = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
      mag[static_cast<std::size_t>(h) * W + w] = m;
      max_mag = std::max(max_mag, m);
    }
  }

  EdgeMap edges(H, W);
  if (max_mag == 0.0) return edges;
  const double cutoff = magnitude_fraction * max_mag;
  for (std::size_t i = 0; i < mag.size(); ++i) edges.bits[i] = mag[i] >= cutoff ? 1 : 0;
  return edges;
}

}  // namespace marg
