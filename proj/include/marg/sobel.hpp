#pragma once

#include "marg/image.hpp"

namespace marg {

// Sobel edge detector. Grayscale = unweighted channel mean, 3x3 kernels with
// edge-replication padding, binarized at magnitude_fraction of the image's
// maximum gradient magnitude. An all-constant image yields an all-false map.
EdgeMap sobel_edges(const Image& img, double magnitude_fraction = 0.25);

}  // namespace marg
