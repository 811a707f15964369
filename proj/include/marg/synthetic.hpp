#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "marg/image.hpp"

namespace marg {

enum class SceneKind { Flat, TwoToneSplit, DiagonalStripe, Wraparound };

std::string to_string(SceneKind k);  // "flat", "split", "stripe", "wrap"
SceneKind scene_kind_from_string(const std::string& s);  // throws ConfigError

struct SceneSpec {
  SceneKind kind = SceneKind::Flat;
  int height = 64;
  int width = 64;
  Rgb bg{128, 128, 128};
  Rgb fg{200, 60, 60};

  int split_col = 32;  // TwoToneSplit: foreground occupies columns >= split_col

  int stripe_width = 8;      // DiagonalStripe: foreground where 0 <= w-h < stripe_width
  bool bg_gradient = false;  // DiagonalStripe: horizontal grayscale ramp instead of flat bg
  int ramp_lo = 40;
  int ramp_hi = 215;

  int band_lo = 24;  // Wraparound: foreground columns [band_lo, band_hi),
  int band_hi = 40;  // background flanks it on both sides

  int noise_amplitude = 0;  // uniform per-channel noise in [-a, a], clamped
  std::uint64_t prng_seed = 0;
};

struct Scene {
  Image image;
  BinaryMask mask;  // exact ground truth, unaffected by noise
};

// Throws ConfigError on nonsensical geometry (band outside the image, stripe
// wider than the diagonal extent, degenerate split).
Scene make_synthetic(const SceneSpec& spec);

nlohmann::json scene_spec_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const nlohmann::json& j);

}  // namespace marg
