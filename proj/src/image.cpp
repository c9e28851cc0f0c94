#include "uwdepth/image.hpp"

#include <algorithm>
#include <cmath>

namespace uwdepth {
namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

std::vector<Rgb> checked_rgb(std::vector<Rgb> data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Rgb& p = data[i];
    if (!in_unit(p.r) || !in_unit(p.g) || !in_unit(p.b)) {
      throw InvalidArgument("rgb pixel " + std::to_string(i) + " outside [0, 1]");
    }
  }
  return data;
}

}  // namespace

RgbImage::RgbImage(int width, int height, std::vector<Rgb> data)
    : Raster<Rgb>(width, height, checked_rgb(std::move(data))) {}

DepthMap::DepthMap(int width, int height, std::vector<double> depth,
                   std::vector<std::uint8_t> valid, double depth_scale)
    : width_(width),
      height_(height),
      depth_(std::move(depth)),
      valid_(std::move(valid)),
      depth_scale_(depth_scale) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("depth map dimensions must be positive");
  }
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (depth_.size() != n || valid_.size() != n) {
    throw InvalidArgument("depth map buffers do not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (!(depth_scale > 0.0) || !std::isfinite(depth_scale)) {
    throw InvalidArgument("depth_scale must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (valid_[i] != 0) {
      valid_[i] = 1;
      if (!in_unit(depth_[i])) {
        throw InvalidArgument("valid depth pixel " + std::to_string(i) + " outside [0, 1]");
      }
    }
  }
}

DepthMap::DepthMap(int width, int height, std::vector<double> depth, double depth_scale)
    : DepthMap(width, height, std::move(depth),
               std::vector<std::uint8_t>(
                   static_cast<std::size_t>(std::max(width, 0)) *
                       static_cast<std::size_t>(std::max(height, 0)),
                   1),
               depth_scale) {}

DepthMap DepthMap::constant(int width, int height, double value, double depth_scale) {
  const auto n = static_cast<std::size_t>(std::max(width, 0)) *
                 static_cast<std::size_t>(std::max(height, 0));
  return DepthMap(width, height, std::vector<double>(n, value), depth_scale);
}

std::size_t DepthMap::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

Plane DepthMap::to_plane() const { return Plane(width_, height_, depth_); }

}  // namespace uwdepth
