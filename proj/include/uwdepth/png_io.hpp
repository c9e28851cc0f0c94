#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "uwdepth/image.hpp"

namespace uwdepth {

/// Raw decoded PNG samples, interleaved, row-major.
///
/// Samples below 8 bits per channel are unpacked (and gray scaled) to 8 bits;
/// palette images are expanded to 8-bit RGB.
struct PngRaster {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;  // 8 or 16 after decoding
  std::vector<std::uint16_t> samples;
};

/// Throws IoError if the file cannot be opened, FormatError if it is not a decodable PNG.
PngRaster read_png(const std::filesystem::path& path);

/// channels in {1, 2, 3, 4}, bit_depth in {8, 16}. Throws IoError.
void write_png(const std::filesystem::path& path, const PngRaster& raster);

/// 8- or 16-bit three-channel PNG scaled to [0, 1].
RgbImage load_rgb(const std::filesystem::path& path);

void save_rgb(const RgbImage& image, const std::filesystem::path& path, int bit_depth = 16);

/// 16-bit single-channel PNG. Raw 0 marks an invalid pixel; others map to raw / 65535.
DepthMap load_depth(const std::filesystem::path& path, double depth_scale = 1.0);

/// Writes round(depth * 65535) for valid pixels and 0 for invalid ones. A valid
/// pixel that would quantize to 0 is written as 1 so the mask survives a reload.
void save_depth(const DepthMap& map, const std::filesystem::path& path);

/// Grayscale PNG where nonzero marks salient pixels; returns a {0, 1} plane.
Plane load_mask(const std::filesystem::path& path);

/// 8-bit colormapped rendering of a depth map, near pixels bright. Invalid pixels are black.
void save_depth_visualization(const DepthMap& map, const std::filesystem::path& path);

/// 8-bit PNG with (r, m, i) stored in the (red, green, blue) channels.
void save_rmi(const RmiImage& image, const std::filesystem::path& path);

}  // namespace uwdepth
