#include "marg/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "marg/errors.hpp"

namespace marg {
namespace {

struct FileHandle {
  std::FILE* fp = nullptr;
  explicit FileHandle(const std::filesystem::path& path, const char* mode)
      : fp(std::fopen(path.string().c_str(), mode)) {}
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
};

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Decodes into 8-bit rows with `channels` samples per pixel. Every input is
// normalized to that layout first (palette expansion, gray promotion, alpha
// strip); 16-bit files are rejected rather than quantized.
std::vector<std::uint8_t> read_png_8bit(const std::filesystem::path& path, int channels, int& H,
                                        int& W) {
  FileHandle file(path, "rb");
  if (!file.fp) throw IoError("cannot open " + path.string());
  PngReader r;
  if (!r.png || !r.info) throw IoError("png reader allocation failed");
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode " + path.string());

  png_init_io(r.png, file.fp);
  png_read_info(r.png, r.info);

  if (png_get_bit_depth(r.png, r.info) > 8)
    throw FormatError("unsupported bit depth in " + path.string());

  png_set_palette_to_rgb(r.png);
  png_set_expand_gray_1_2_4_to_8(r.png);
  png_set_strip_alpha(r.png);
  if (channels == 3) png_set_gray_to_rgb(r.png);
  if (channels == 1) png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
  png_read_update_info(r.png, r.info);

  H = static_cast<int>(png_get_image_height(r.png, r.info));
  W = static_cast<int>(png_get_image_width(r.png, r.info));
  if (png_get_rowbytes(r.png, r.info) != static_cast<std::size_t>(W) * channels)
    throw FormatError("unexpected channel layout in " + path.string());

  std::vector<std::uint8_t> data(static_cast<std::size_t>(H) * W * channels);
  std::vector<png_bytep> rows(H);
  for (int h = 0; h < H; ++h) rows[h] = data.data() + static_cast<std::size_t>(h) * W * channels;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return data;
}

void write_png(const std::filesystem::path& path, int H, int W, int bit_depth, int color_type,
               const std::vector<std::uint8_t>& data) {
  FileHandle file(path, "wb");
  if (!file.fp) throw IoError("cannot open " + path.string() + " for writing");
  PngWriter wr;
  if (!wr.png || !wr.info) throw IoError("png writer allocation failed");
  if (setjmp(png_jmpbuf(wr.png))) throw IoError("failed to write " + path.string());

  png_init_io(wr.png, file.fp);
  png_set_IHDR(wr.png, wr.info, W, H, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);

  const std::size_t row_bytes = data.size() / H;
  std::vector<png_bytep> rows(H);
  for (int h = 0; h < H; ++h)
    rows[h] = const_cast<png_bytep>(data.data() + static_cast<std::size_t>(h) * row_bytes);
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  Image img;
  img.data = read_png_8bit(path, 3, img.height, img.width);
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
  write_png(path, img.height, img.width, 8, PNG_COLOR_TYPE_RGB, img.data);
}

BinaryMask load_mask(const std::filesystem::path& path) {
  BinaryMask mask;
  const auto gray = read_png_8bit(path, 1, mask.height, mask.width);
  mask.bits.resize(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i) mask.bits[i] = gray[i] != 0 ? 1 : 0;
  return mask;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> gray(mask.bits.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;
  write_png(path, mask.height, mask.width, 8, PNG_COLOR_TYPE_GRAY, gray);
}

void save_region_map(const RegionMap& map, const RegionMapMeta& meta,
                     const std::filesystem::path& path) {
  if (map.max_id() > 65535 || meta.regions.size() > 65535)
    throw CapacityError("region count exceeds 16-bit id depth");

  // PNG 16-bit samples are big-endian in the file.
  std::vector<std::uint8_t> raw(map.ids.size() * 2);
  for (std::size_t i = 0; i < map.ids.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(map.ids[i] >> 8);
    raw[2 * i + 1] = static_cast<std::uint8_t>(map.ids[i] & 0xff);
  }
  write_png(path, map.height, map.width, 16, PNG_COLOR_TYPE_GRAY, raw);

  nlohmann::json regions = nlohmann::json::array();
  for (const auto& r : meta.regions) {
    regions.push_back({{"id", r.id}, {"pixels", r.pixels}, {"seed", {r.seed.h, r.seed.w}}});
  }
  const nlohmann::json manifest = {
      {"n_regions", meta.regions.size()}, {"regions", regions},
      {"tau_l", meta.tau_l},              {"tau_s", meta.tau_s},
      {"topology", to_string(meta.topology)},  {"prng_seed", meta.prng_seed},
      {"coverage", meta.coverage},
  };

  auto manifest_path = path;
  manifest_path.replace_extension(".json");
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot open " + manifest_path.string() + " for writing");
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("failed to write " + manifest_path.string());
}

std::pair<RegionMap, RegionMapMeta> load_region_map(const std::filesystem::path& path) {
  FileHandle file(path, "rb");
  if (!file.fp) throw IoError("cannot open " + path.string());
  PngReader r;
  if (!r.png || !r.info) throw IoError("png reader allocation failed");
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode " + path.string());

  png_init_io(r.png, file.fp);
  png_read_info(r.png, r.info);
  if (png_get_bit_depth(r.png, r.info) != 16 ||
      png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY)
    throw FormatError("region map must be 16-bit grayscale: " + path.string());

  RegionMap map(static_cast<int>(png_get_image_height(r.png, r.info)),
                static_cast<int>(png_get_image_width(r.png, r.info)));
  std::vector<std::uint8_t> raw(map.ids.size() * 2);
  std::vector<png_bytep> rows(map.height);
  for (int h = 0; h < map.height; ++h)
    rows[h] = raw.data() + static_cast<std::size_t>(h) * map.width * 2;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  for (std::size_t i = 0; i < map.ids.size(); ++i)
    map.ids[i] = (static_cast<std::uint32_t>(raw[2 * i]) << 8) | raw[2 * i + 1];

  auto manifest_path = path;
  manifest_path.replace_extension(".json");
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad manifest " + manifest_path.string() + ": " + e.what());
  }

  RegionMapMeta meta;
  try {
    meta.tau_l = manifest.at("tau_l").get<int>();
    meta.tau_s = manifest.at("tau_s").get<int>();
    meta.topology = topology_from_string(manifest.at("topology").get<std::string>());
    meta.prng_seed = manifest.at("prng_seed").get<std::uint64_t>();
    meta.coverage = manifest.value("coverage", 0.0);
    for (const auto& r : manifest.at("regions")) {
      RegionManifestEntry e;
      e.id = r.at("id").get<std::uint32_t>();
      e.pixels = r.at("pixels").get<std::uint64_t>();
      e.seed = {r.at("seed").at(0).get<int>(), r.at("seed").at(1).get<int>()};
      meta.regions.push_back(e);
    }
    if (manifest.at("n_regions").get<std::size_t>() != meta.regions.size())
      throw FormatError("manifest region count mismatch in " + manifest_path.string());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad manifest " + manifest_path.string() + ": " + e.what());
  }
  return {std::move(map), std::move(meta)};
}

}  // namespace marg
