#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace marg {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// 8-bit RGB raster, row-major.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // height * width * 3

  Image() = default;
  Image(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0) {}

  static Image filled(int h, int w, Rgb c) {
    Image img(h, w);
    for (int i = 0; i < h * w; ++i) {
      img.data[3 * i + 0] = c.r;
      img.data[3 * i + 1] = c.g;
      img.data[3 * i + 2] = c.b;
    }
    return img;
  }

  std::size_t n_pixels() const { return static_cast<std::size_t>(height) * width; }

  bool in_bounds(int h, int w) const { return h >= 0 && h < height && w >= 0 && w < width; }

  Rgb at(int h, int w) const {
    const std::size_t i = (static_cast<std::size_t>(h) * width + w) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }

  void set(int h, int w, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(h) * width + w) * 3;
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
  }

  bool operator==(const Image&) const = default;
};

// H x W boolean raster. Also used for edge maps (true = edge pixel).
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1

  BinaryMask() = default;
  BinaryMask(int h, int w) : height(h), width(w), bits(static_cast<std::size_t>(h) * w, 0) {}

  bool at(int h, int w) const { return bits[static_cast<std::size_t>(h) * width + w] != 0; }
  void set(int h, int w, bool v) { bits[static_cast<std::size_t>(h) * width + w] = v ? 1 : 0; }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
  }

  bool operator==(const BinaryMask&) const = default;
};

using EdgeMap = BinaryMask;

// Single-assignment projection of a region set: 0 = unassigned, i >= 1 = region id.
struct RegionMap {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> ids;

  RegionMap() = default;
  RegionMap(int h, int w) : height(h), width(w), ids(static_cast<std::size_t>(h) * w, 0) {}

  std::uint32_t at(int h, int w) const { return ids[static_cast<std::size_t>(h) * width + w]; }
  void set(int h, int w, std::uint32_t id) { ids[static_cast<std::size_t>(h) * width + w] = id; }

  std::uint32_t max_id() const {
    std::uint32_t m = 0;
    for (std::uint32_t v : ids) m = v > m ? v : m;
    return m;
  }

  bool operator==(const RegionMap&) const = default;
};

// Bitset over the H x W pixel grid; region membership representation.
class PixelSet {
 public:
  PixelSet() = default;
  PixelSet(int h, int w)
      : height_(h), width_(w), words_((static_cast<std::size_t>(h) * w + 63) / 64, 0) {}

  int height() const { return height_; }
  int width() const { return width_; }

  bool test(int idx) const { return (words_[idx >> 6] >> (idx & 63)) & 1u; }
  bool test(int h, int w) const { return test(h * width_ + w); }

  void set(int idx) {
    std::uint64_t& word = words_[idx >> 6];
    const std::uint64_t bit = 1ull << (idx & 63);
    if (!(word & bit)) {
      word |= bit;
      ++size_;
    }
  }
  void set(int h, int w) { set(h * width_ + w); }

  std::size_t size() const { return size_; }

  void unite(const PixelSet& other) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] |= other.words_[i];
      n += std::popcount(words_[i]);
    }
    size_ = n;
  }

  static std::size_t intersection_count(const PixelSet& a, const PixelSet& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) n += std::popcount(a.words_[i] & b.words_[i]);
    return n;
  }

  // Visits set pixel indices in ascending order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t word = words_[wi];
      while (word) {
        const int bit = std::countr_zero(word);
        f(static_cast<int>(wi * 64 + bit));
        word &= word - 1;
      }
    }
  }

  static PixelSet from_mask(const BinaryMask& m) {
    PixelSet s(m.height, m.width);
    for (std::size_t i = 0; i < m.bits.size(); ++i)
      if (m.bits[i]) s.set(static_cast<int>(i));
    return s;
  }

  BinaryMask to_mask() const {
    BinaryMask m(height_, width_);
    for_each([&](int idx) { m.bits[idx] = 1; });
    return m;
  }

  bool operator==(const PixelSet&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace marg
