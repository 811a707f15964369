#include "marg/mixgen.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "marg/errors.hpp"
#include "marg/png_io.hpp"

namespace marg {
namespace {

void validate(const MixConfig& cfg) {
  if (cfg.max_members < 1) throw ConfigError("max members must be at least 1");
  if (cfg.samples_per_image < 0) throw ConfigError("sample count must be non-negative");
  if (cfg.p_lo < 0.0 || cfg.p_hi > 1.0 || cfg.p_lo >= cfg.p_hi)
    throw ConfigError("purity cutoffs must satisfy 0 <= p_lo < p_hi <= 1");
}

double purity_of(const PixelSet& pixels, const BinaryMask& gt) {
  std::uint64_t f = 0;
  pixels.for_each([&](int idx) { f += gt.bits[idx]; });
  return static_cast<double>(f) / static_cast<double>(pixels.size());
}

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu.png", prefix, i);
  return buf;
}

nlohmann::json entry_line(const std::string& image, const std::string& mask_file, double label,
                          const std::vector<std::uint32_t>& member_ids, const char* mode) {
  return {{"image", image},
          {"mask_file", mask_file},
          {"label", label},
          {"member_ids", member_ids},
          {"mode", mode}};
}

std::filesystem::path write_manifest(const std::string& image_ref, const char* mode,
                                     const std::vector<nlohmann::json>& lines,
                                     const std::filesystem::path& out_dir) {
  const auto path = out_dir / "manifest.jsonl";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const nlohmann::json header = {
      {"image", image_ref}, {"mode", mode}, {"n_samples", lines.size()}};
  out << header.dump() << "\n";
  for (const auto& line : lines) out << line.dump() << "\n";
  if (!out) throw IoError("failed to write " + path.string());
  return path;
}

}  // namespace

std::vector<LabeledRegion> label_regions(const RegionSet& rs, const BinaryMask& gt,
                                         const MixConfig& cfg) {
  validate(cfg);
  std::vector<LabeledRegion> out;
  for (const Region& r : rs.regions) {
    LabeledRegion lr;
    lr.id = r.id;
    lr.purity = purity_of(r.pixels, gt);
    lr.label = lr.purity >= cfg.p_hi   ? RegionLabel::Blade
               : lr.purity <= cfg.p_lo ? RegionLabel::Background
                                       : RegionLabel::Ambiguous;
    out.push_back(lr);
  }
  return out;
}

MixSample synth_mix(const RegionSet& rs, const BinaryMask& gt, const MixConfig& cfg, Rng& rng) {
  validate(cfg);
  const int n = static_cast<int>(rs.regions.size());
  if (n == 0) throw ConfigError("cannot mix from an empty region set");

  const int m = 1 + static_cast<int>(rng.next_below(std::min(n, cfg.max_members)));
  std::vector<int> index(n);
  std::iota(index.begin(), index.end(), 0);
  // Partial Fisher-Yates: the first m slots end up a uniform subset.
  for (int t = 0; t < m; ++t)
    std::swap(index[t], index[t + static_cast<int>(rng.next_below(n - t))]);

  MixSample sample;
  PixelSet mix(rs.height, rs.width);
  for (int t = 0; t < m; ++t) {
    const Region& r = rs.regions[index[t]];
    sample.member_ids.push_back(r.id);
    mix.unite(r.pixels);
  }
  sample.label = purity_of(mix, gt);
  sample.mask = mix.to_mask();
  return sample;
}

std::vector<MixSample> synth_mix_batch(const RegionSet& rs, const BinaryMask& gt,
                                       const MixConfig& cfg) {
  validate(cfg);
  // exceptions must not escape the parallel loop
  if (rs.regions.empty()) throw ConfigError("cannot mix from an empty region set");
  std::vector<MixSample> samples(cfg.samples_per_image);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(samples.size()); ++i) {
    Rng rng = Rng::split(cfg.prng_seed, static_cast<std::uint64_t>(i));
    samples[i] = synth_mix(rs, gt, cfg, rng);
  }
  return samples;
}

std::filesystem::path export_mix_dataset(const std::string& image_ref,
                                         const std::vector<MixSample>& samples,
                                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<nlohmann::json> lines;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string name = padded("mix", i);
    save_mask(samples[i].mask, out_dir / name);
    lines.push_back(entry_line(image_ref, name, samples[i].label, samples[i].member_ids,
                               "regionmix"));
  }
  return write_manifest(image_ref, "regionmix", lines, out_dir);
}

std::filesystem::path export_binary_dataset(const std::string& image_ref, const RegionSet& rs,
                                            const std::vector<LabeledRegion>& labeled,
                                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<nlohmann::json> lines;
  for (const LabeledRegion& lr : labeled) {
    if (lr.label == RegionLabel::Ambiguous) continue;
    const Region* region = nullptr;
    for (const Region& r : rs.regions)
      if (r.id == lr.id) region = &r;
    if (!region) throw ConfigError("labeled region id not present in region set");
    const std::string name = padded("region", lr.id);
    save_mask(region->pixels.to_mask(), out_dir / name);
    lines.push_back(entry_line(image_ref, name, lr.label == RegionLabel::Blade ? 1.0 : 0.0,
                               {region->id}, "binary"));
  }
  return write_manifest(image_ref, "binary", lines, out_dir);
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("manifest missing header: " + path.string());
  Manifest mf;
  try {
    const auto header = nlohmann::json::parse(line);
    mf.image = header.at("image").get<std::string>();
    mf.mode = header.at("mode").get<std::string>();
    mf.n_samples = header.at("n_samples").get<std::size_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.mask_file = j.at("mask_file").get<std::string>();
      e.label = j.at("label").get<double>();
      e.member_ids = j.at("member_ids").get<std::vector<std::uint32_t>>();
      mf.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("bad manifest " + path.string() + ": " + ex.what());
  }
  if (mf.entries.size() != mf.n_samples)
    throw FormatError("manifest header count mismatch: " + path.string());
  return mf;
}

}  // namespace marg
