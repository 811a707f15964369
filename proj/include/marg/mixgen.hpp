#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "marg/grow.hpp"
#include "marg/image.hpp"
#include "marg/rng.hpp"

namespace marg {

enum class RegionLabel { Background = 0, Blade = 1, Ambiguous = 2 };

struct LabeledRegion {
  std::uint32_t id = 0;
  RegionLabel label = RegionLabel::Ambiguous;
  double purity = 0.0;  // |R ∩ M| / |R|
};

struct MixConfig {
  int max_members = 5;        // subset size drawn uniformly from 1..min(N, max_members)
  int samples_per_image = 100;
  std::uint64_t prng_seed = 0;
  double p_hi = 0.95;  // Blade iff purity >= p_hi
  double p_lo = 0.05;  // Background iff purity <= p_lo
};

struct MixSample {
  BinaryMask mask;  // union of the member regions
  double label = 0.0;  // |mask ∩ M| / |mask|
  std::vector<std::uint32_t> member_ids;  // draw order
};

// Labels every region by ground-truth purity. Ambiguous regions are reported,
// not dropped; exporters skip them.
std::vector<LabeledRegion> label_regions(const RegionSet& rs, const BinaryMask& gt,
                                         const MixConfig& cfg);

// One composite sample: member count uniform in {1..min(N, max_members)},
// members drawn uniformly without replacement. Throws ConfigError on an empty
// RegionSet.
MixSample synth_mix(const RegionSet& rs, const BinaryMask& gt, const MixConfig& cfg, Rng& rng);

// cfg.samples_per_image samples, sample i drawn from the PRNG stream
// split(prng_seed, i); deterministic regardless of scheduling.
std::vector<MixSample> synth_mix_batch(const RegionSet& rs, const BinaryMask& gt,
                                       const MixConfig& cfg);

// Both exporters write one mask PNG per sample plus manifest.jsonl: a header
// line {image, mode, n_samples} followed by one line per sample
// {image, mask_file, label, member_ids, mode}. Returns the manifest path.
// Mix samples carry fractional labels; binary mode emits only Blade (1.0) and
// Background (0.0) regions.
std::filesystem::path export_mix_dataset(const std::string& image_ref,
                                         const std::vector<MixSample>& samples,
                                         const std::filesystem::path& out_dir);
std::filesystem::path export_binary_dataset(const std::string& image_ref, const RegionSet& rs,
                                            const std::vector<LabeledRegion>& labeled,
                                            const std::filesystem::path& out_dir);

struct ManifestEntry {
  std::string mask_file;
  double label = 0.0;
  std::vector<std::uint32_t> member_ids;
};

struct Manifest {
  std::string image;
  std::string mode;
  std::size_t n_samples = 0;
  std::vector<ManifestEntry> entries;
};

Manifest read_manifest(const std::filesystem::path& path);

}  // namespace marg
