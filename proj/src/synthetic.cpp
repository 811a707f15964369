#include "marg/synthetic.hpp"

#include <algorithm>

#include "marg/errors.hpp"
#include "marg/rng.hpp"

namespace marg {

std::string to_string(SceneKind k) {
  switch (k) {
    case SceneKind::Flat:
      return "flat";
    case SceneKind::TwoToneSplit:
      return "split";
    case SceneKind::DiagonalStripe:
      return "stripe";
    case SceneKind::Wraparound:
      return "wrap";
  }
  return "flat";
}

SceneKind scene_kind_from_string(const std::string& s) {
  if (s == "flat") return SceneKind::Flat;
  if (s == "split") return SceneKind::TwoToneSplit;
  if (s == "stripe") return SceneKind::DiagonalStripe;
  if (s == "wrap") return SceneKind::Wraparound;
  throw ConfigError("unknown scene kind: " + s);
}

nlohmann::json scene_spec_json(const SceneSpec& s) {
  return {
      {"scene", to_string(s.kind)},
      {"height", s.height},
      {"width", s.width},
      {"bg", {s.bg.r, s.bg.g, s.bg.b}},
      {"fg", {s.fg.r, s.fg.g, s.fg.b}},
      {"split_col", s.split_col},
      {"stripe_width", s.stripe_width},
      {"bg_gradient", s.bg_gradient},
      {"ramp_lo", s.ramp_lo},
      {"ramp_hi", s.ramp_hi},
      {"band_lo", s.band_lo},
      {"band_hi", s.band_hi},
      {"noise_amplitude", s.noise_amplitude},
      {"prng_seed", s.prng_seed},
  };
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  SceneSpec s;
  auto rgb = [&](const char* key, Rgb fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    return Rgb{a.at(0).get<std::uint8_t>(), a.at(1).get<std::uint8_t>(),
               a.at(2).get<std::uint8_t>()};
  };
  s.kind = scene_kind_from_string(j.value("scene", to_string(s.kind)));
  s.height = j.value("height", s.height);
  s.width = j.value("width", s.width);
  s.bg = rgb("bg", s.bg);
  s.fg = rgb("fg", s.fg);
  s.split_col = j.value("split_col", s.split_col);
  s.stripe_width = j.value("stripe_width", s.stripe_width);
  s.bg_gradient = j.value("bg_gradient", s.bg_gradient);
  s.ramp_lo = j.value("ramp_lo", s.ramp_lo);
  s.ramp_hi = j.value("ramp_hi", s.ramp_hi);
  s.band_lo = j.value("band_lo", s.band_lo);
  s.band_hi = j.value("band_hi", s.band_hi);
  s.noise_amplitude = j.value("noise_amplitude", s.noise_amplitude);
  s.prng_seed = j.value("prng_seed", s.prng_seed);
  return s;
}

namespace {

std::uint8_t ramp_value(const SceneSpec& s, int w) {
  if (s.width == 1) return static_cast<std::uint8_t>(s.ramp_lo);
  const int v = s.ramp_lo + (s.ramp_hi - s.ramp_lo) * w / (s.width - 1);
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

void validate(const SceneSpec& s) {
  if (s.height < 1 || s.width < 1) throw ConfigError("scene dimensions must be positive");
  if (s.noise_amplitude < 0) throw ConfigError("noise amplitude must be non-negative");
  switch (s.kind) {
    case SceneKind::Flat:
      break;
    case SceneKind::TwoToneSplit:
      if (s.split_col <= 0 || s.split_col >= s.width)
        throw ConfigError("split column must leave both tones visible");
      break;
    case SceneKind::DiagonalStripe:
      if (s.stripe_width < 1 || s.stripe_width > s.width)
        throw ConfigError("stripe width must be in [1, width]");
      break;
    case SceneKind::Wraparound:
      if (s.band_lo <= 0 || s.band_hi >= s.width || s.band_lo >= s.band_hi)
        throw ConfigError("wraparound band must leave background on both sides");
      break;
  }
}

}  // namespace

Scene make_synthetic(const SceneSpec& spec) {
  validate(spec);
  const int H = spec.height, W = spec.width;
  Scene scene;
  scene.image = Image(H, W);
  scene.mask = BinaryMask(H, W);

  for (int h = 0; h < H; ++h) {
    for (int w = 0; w < W; ++w) {
      bool fg = false;
      switch (spec.kind) {
        case SceneKind::Flat:
          break;
        case SceneKind::TwoToneSplit:
          fg = w >= spec.split_col;
          break;
        case SceneKind::DiagonalStripe:
          fg = w - h >= 0 && w - h < spec.stripe_width;
          break;
        case SceneKind::Wraparound:
          fg = w >= spec.band_lo && w < spec.band_hi;
          break;
      }
      Rgb c;
      if (fg) {
        c = spec.fg;
      } else if (spec.kind == SceneKind::DiagonalStripe && spec.bg_gradient) {
        const std::uint8_t v = ramp_value(spec, w);
        c = {v, v, v};
      } else {
        c = spec.bg;
      }
      scene.image.set(h, w, c);
      scene.mask.set(h, w, fg);
    }
  }

  if (spec.noise_amplitude > 0) {
    Rng rng(spec.prng_seed);
    const int a = spec.noise_amplitude;
    for (std::size_t i = 0; i < scene.image.data.size(); ++i) {
      const int v = scene.image.data[i] + rng.uniform_int(-a, a);
      scene.image.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return scene;
}

}  // namespace marg
