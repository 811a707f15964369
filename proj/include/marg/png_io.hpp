#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "marg/image.hpp"
#include "marg/topology.hpp"

namespace marg {

// 8-bit RGB, or grayscale promoted by channel replication. Alpha is dropped,
// palette images are expanded. 16-bit files are rejected (FormatError).
Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

// Masks are 8-bit grayscale PNGs, 0 = background, 255 = foreground. Loading
// treats any nonzero value as foreground.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

struct RegionManifestEntry {
  std::uint32_t id = 0;
  std::uint64_t pixels = 0;
  Coord seed;
};

struct RegionMapMeta {
  std::vector<RegionManifestEntry> regions;
  int tau_l = 0;
  int tau_s = 0;
  Topology topology = Topology::Modular;
  std::uint64_t prng_seed = 0;
  double coverage = 0.0;  // covered fraction before hole filling
};

// 16-bit grayscale PNG of region ids plus a sidecar manifest at the same path
// with a .json extension. Byte-deterministic for equal inputs. More than
// 65535 regions exceeds the id depth (CapacityError).
void save_region_map(const RegionMap& map, const RegionMapMeta& meta,
                     const std::filesystem::path& path);
std::pair<RegionMap, RegionMapMeta> load_region_map(const std::filesystem::path& path);

}  // namespace marg
