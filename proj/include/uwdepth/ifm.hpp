#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "uwdepth/image.hpp"

namespace uwdepth {

enum class Channel { kRed = 0, kGreen = 1, kBlue = 2 };

/// Per-channel attenuation (per normalized-depth unit) and veiling background light.
struct WaterParams {
  std::array<double, 3> beta{};
  std::array<double, 3> background{};
};

/// Throws InvalidArgument for negative beta or background outside [0, 1].
/// Returns human-readable warnings for implausible but legal settings (red
/// attenuating less than green or blue).
std::vector<std::string> validate(const WaterParams& params);

/// Named presets: "oceanI", "oceanII", "coastal". These are synthetic test
/// constants ordered so red attenuates fastest; they are not measured water data.
WaterParams water_preset(const std::string& name);
std::vector<std::string> water_preset_names();

/// Contrast below which |I - B| is treated as uninvertible.
inline constexpr double kContrastThreshold = 1e-3;

struct SyntheticScene {
  RgbImage clear;
  DepthMap depth;
  WaterParams params;
};

enum class DepthProfile { kLinearRamp, kRadial, kRandomSmooth };

const char* profile_name(DepthProfile profile) noexcept;
/// Accepts "linear-ramp", "radial", "random-smooth"; throws InvalidArgument otherwise.
DepthProfile parse_profile(const std::string& name);

/// Transmission e^{-beta d}.
double transmission(double beta, double depth) noexcept;

/// U = I t + B (1 - t) per channel, clamped to [0, 1]. Every depth pixel must
/// be valid. Throws DimensionMismatch, InvalidArgument.
RgbImage ifm_synthesize(const SyntheticScene& scene);

/// Solves the formation model for depth on one channel. Pixels with
/// |I - B| < kContrastThreshold, or whose observed value lies on the far side
/// of B, are marked invalid; recovered depths are clamped to [0, 1].
/// Throws ZeroAttenuation when the channel's beta is 0, DimensionMismatch.
DepthMap ifm_invert_depth(const RgbImage& observed, const WaterParams& params,
                          const RgbImage& clear, Channel channel, double depth_scale = 1.0);

/// Deterministic procedural scene: smooth textured clear image plus a depth
/// profile. Bit-identical for equal arguments. Throws UnknownPreset,
/// InvalidArgument for non-positive dimensions.
SyntheticScene ifm_make_scene(int width, int height, const std::string& preset,
                              DepthProfile profile, std::uint64_t seed);

/// Counter-based uniform in [0, 1): a pure function of (seed, stream, index).
double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace uwdepth
