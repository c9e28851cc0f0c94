#include "uwdepth/ifm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace uwdepth {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

const std::map<std::string, WaterParams>& presets() {
  // beta per normalized depth unit; background light per channel.
  static const std::map<std::string, WaterParams> table = {
      {"oceanI", {{1.0, 0.35, 0.25}, {0.05, 0.55, 0.65}}},
      {"oceanII", {{1.3, 0.45, 0.40}, {0.04, 0.50, 0.60}}},
      {"coastal", {{1.6, 0.70, 0.90}, {0.03, 0.60, 0.45}}},
  };
  return table;
}

double smoothstep(double t) noexcept { return t * t * (3.0 - 2.0 * t); }

// Bilinearly interpolated lattice noise in [0, 1), lattice spacing `cell` pixels.
double value_noise(std::uint64_t seed, std::uint64_t stream, double x, double y,
                   double cell) noexcept {
  const double gx = x / cell;
  const double gy = y / cell;
  const auto ix = static_cast<std::int64_t>(std::floor(gx));
  const auto iy = static_cast<std::int64_t>(std::floor(gy));
  const double fx = smoothstep(gx - static_cast<double>(ix));
  const double fy = smoothstep(gy - static_cast<double>(iy));
  auto lattice = [&](std::int64_t lx, std::int64_t ly) {
    const auto index = (static_cast<std::uint64_t>(ly) << 32) ^
                       static_cast<std::uint64_t>(static_cast<std::uint32_t>(lx));
    return hashed_uniform(seed, stream, index);
  };
  const double top = lattice(ix, iy) + fx * (lattice(ix + 1, iy) - lattice(ix, iy));
  const double bottom =
      lattice(ix, iy + 1) + fx * (lattice(ix + 1, iy + 1) - lattice(ix, iy + 1));
  return top + fy * (bottom - top);
}

std::vector<double> depth_profile(int width, int height, DepthProfile profile,
                                  std::uint64_t seed) {
  std::vector<double> depth(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  switch (profile) {
    case DepthProfile::kLinearRamp:
      for (int y = 0; y < height; ++y) {
        const double d = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
        std::fill_n(depth.begin() + static_cast<std::ptrdiff_t>(y) * width, width, d);
      }
      break;
    case DepthProfile::kRadial: {
      const double cx = 0.5 * (width - 1);
      const double cy = 0.5 * (height - 1);
      const double rmax = std::hypot(cx, cy);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double r = std::hypot(x - cx, y - cy);
          depth[static_cast<std::size_t>(y) * width + x] =
              rmax > 0.0 ? std::min(r / rmax, 1.0) : 0.0;
        }
      }
      break;
    }
    case DepthProfile::kRandomSmooth: {
      const double cell = std::max(4.0, std::max(width, height) / 3.0);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          depth[static_cast<std::size_t>(y) * width + x] =
              0.7 * value_noise(seed, 100, x, y, cell) +
              0.3 * value_noise(seed, 101, x, y, 0.5 * cell);
        }
      }
      const auto [lo, hi] = std::minmax_element(depth.begin(), depth.end());
      const double min_v = *lo;
      const double span = *hi - *lo;
      for (double& d : depth) d = span > 0.0 ? std::clamp((d - min_v) / span, 0.0, 1.0) : 0.0;
      break;
    }
  }
  return depth;
}

}  // namespace

double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<std::string> validate(const WaterParams& params) {
  static constexpr const char* kNames[3] = {"R", "G", "B"};
  for (std::size_t c = 0; c < 3; ++c) {
    if (!std::isfinite(params.beta[c]) || params.beta[c] < 0.0) {
      throw InvalidArgument(std::string("beta_") + kNames[c] + " must be finite and >= 0");
    }
    if (!std::isfinite(params.background[c]) || params.background[c] < 0.0 ||
        params.background[c] > 1.0) {
      throw InvalidArgument(std::string("background_") + kNames[c] + " must lie in [0, 1]");
    }
  }
  std::vector<std::string> warnings;
  for (std::size_t c = 1; c < 3; ++c) {
    if (params.beta[0] < params.beta[c]) {
      warnings.push_back(std::string("beta_R < beta_") + kNames[c] +
                         ": red normally attenuates fastest underwater");
    }
  }
  return warnings;
}

WaterParams water_preset(const std::string& name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw UnknownPreset("unknown water preset '" + name + "'");
  }
  return it->second;
}

std::vector<std::string> water_preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, params] : presets()) names.push_back(name);
  return names;
}

const char* profile_name(DepthProfile profile) noexcept {
  switch (profile) {
    case DepthProfile::kLinearRamp:
      return "linear-ramp";
    case DepthProfile::kRadial:
      return "radial";
    case DepthProfile::kRandomSmooth:
      return "random-smooth";
  }
  return "linear-ramp";
}

DepthProfile parse_profile(const std::string& name) {
  if (name == "linear-ramp") return DepthProfile::kLinearRamp;
  if (name == "radial") return DepthProfile::kRadial;
  if (name == "random-smooth") return DepthProfile::kRandomSmooth;
  throw InvalidArgument("unknown depth profile '" + name + "'");
}

double transmission(double beta, double depth) noexcept { return std::exp(-beta * depth); }

RgbImage ifm_synthesize(const SyntheticScene& scene) {
  require_same_shape(scene.clear, scene.depth, "ifm_synthesize");
  validate(scene.params);
  if (scene.depth.valid_count() != scene.depth.size()) {
    throw InvalidArgument("ifm_synthesize: every depth pixel must be valid");
  }
  const auto& beta = scene.params.beta;
  const auto& bg = scene.params.background;
  const auto clear = scene.clear.pixels();
  const auto depth = scene.depth.depth();
  std::vector<Rgb> out(clear.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double d = depth[k];
    auto form = [d](double latent, double b, double background) {
      const double t = transmission(b, d);
      return std::clamp(latent * t + background * (1.0 - t), 0.0, 1.0);
    };
    out[k] = Rgb{form(clear[k].r, beta[0], bg[0]), form(clear[k].g, beta[1], bg[1]),
                 form(clear[k].b, beta[2], bg[2])};
  }
  return RgbImage(scene.clear.width(), scene.clear.height(), std::move(out));
}

DepthMap ifm_invert_depth(const RgbImage& observed, const WaterParams& params,
                          const RgbImage& clear, Channel channel, double depth_scale) {
  require_same_shape(observed, clear, "ifm_invert_depth");
  const auto c = static_cast<std::size_t>(channel);
  const double beta = params.beta[c];
  if (!(beta > 0.0)) {
    throw ZeroAttenuation("ifm_invert_depth: beta for the chosen channel is zero");
  }
  const double background = params.background[c];
  auto pick = [c](const Rgb& p) { return c == 0 ? p.r : (c == 1 ? p.g : p.b); };

  const auto obs = observed.pixels();
  const auto lat = clear.pixels();
  std::vector<double> depth(obs.size(), 0.0);
  std::vector<std::uint8_t> valid(obs.size(), 0);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const double contrast = pick(lat[k]) - background;
    if (std::abs(contrast) < kContrastThreshold) continue;
    const double ratio = (pick(obs[k]) - background) / contrast;
    if (!(ratio > 0.0)) continue;
    depth[k] = std::clamp(-std::log(ratio) / beta, 0.0, 1.0);
    valid[k] = 1;
  }
  return DepthMap(observed.width(), observed.height(), std::move(depth), std::move(valid),
                  depth_scale);
}

SyntheticScene ifm_make_scene(int width, int height, const std::string& preset,
                              DepthProfile profile, std::uint64_t seed) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("ifm_make_scene: dimensions must be positive");
  }
  WaterParams params = water_preset(preset);

  // Latent colours: bright red over muted green/blue, each with its own
  // low-amplitude texture so every channel keeps contrast against B.
  static constexpr std::array<double, 3> kBase = {0.80, 0.35, 0.30};
  static constexpr double kAmplitude = 0.10;
  static constexpr double kCell = 8.0;
  std::vector<Rgb> clear(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      auto channel = [&](std::size_t c) {
        const double n = value_noise(seed, c, x, y, kCell) - 0.5;
        return std::clamp(kBase[c] + 2.0 * kAmplitude * n, 0.0, 1.0);
      };
      clear[static_cast<std::size_t>(y) * width + x] = Rgb{channel(0), channel(1), channel(2)};
    }
  }
  return SyntheticScene{RgbImage(width, height, std::move(clear)),
                        DepthMap(width, height, depth_profile(width, height, profile, seed)),
                        params};
}

}  // namespace uwdepth
