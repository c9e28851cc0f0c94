#pragma once

#include "uwdepth/image.hpp"

namespace uwdepth {

/// How the I channel is derived from RGB.
enum class IntensityDef {
  kRec601,  // 0.299 R + 0.587 G + 0.114 B
  kMean,    // (R + G + B) / 3
};

inline constexpr IntensityDef kDefaultIntensity = IntensityDef::kRec601;

const char* intensity_name(IntensityDef def) noexcept;

/// Throws InvalidArgument for an unknown name ("rec601" or "mean").
IntensityDef parse_intensity(const std::string& name);

/// Per-pixel (R, max(G, B), I). Pixel-local; dimensions preserved.
RmiImage rmi_transform(const RgbImage& image, IntensityDef intensity = kDefaultIntensity);

Rmi rmi_pixel(const Rgb& p, IntensityDef intensity = kDefaultIntensity) noexcept;

/// The I channel as a plane, for use as a filter guide.
Plane intensity_plane(const RmiImage& image);

}  // namespace uwdepth
