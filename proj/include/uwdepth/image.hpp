#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uwdepth/errors.hpp"

namespace uwdepth {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// One pixel of the attenuation-aware input space: red, max(green, blue), intensity.
struct Rmi {
  double r = 0.0;
  double m = 0.0;
  double i = 0.0;
  friend bool operator==(const Rmi&, const Rmi&) = default;
};

/// Row-major, immutable pixel grid.
template <typename Pixel>
class Raster {
 public:
  using value_type = Pixel;

  Raster(int width, int height, std::vector<Pixel> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
      throw InvalidArgument("raster dimensions must be positive, got " +
                            std::to_string(width) + "x" + std::to_string(height));
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw InvalidArgument("raster data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
  }

  Raster(int width, int height, const Pixel& fill)
      : Raster(width, height,
               std::vector<Pixel>(static_cast<std::size_t>(width > 0 ? width : 0) *
                                      static_cast<std::size_t>(height > 0 ? height : 0),
                                  fill)) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const Pixel> pixels() const noexcept { return data_; }
  const Pixel& operator[](std::size_t index) const noexcept { return data_[index]; }
  const Pixel& at(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
  }

  template <typename Other>
  bool same_shape(const Raster<Other>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_;
  int height_;
  std::vector<Pixel> data_;
};

/// Observed image with channel intensities in [0, 1].
class RgbImage : public Raster<Rgb> {
 public:
  /// Throws InvalidArgument if any channel is outside [0, 1] or not finite.
  RgbImage(int width, int height, std::vector<Rgb> data);
};

class RmiImage : public Raster<Rmi> {
 public:
  using Raster<Rmi>::Raster;
};

/// Single-channel real image; used for guides and intermediate filter planes.
class Plane : public Raster<double> {
 public:
  using Raster<double>::Raster;
};

/// Normalized depth in [0, 1] with a per-pixel validity mask.
///
/// Invalid pixels carry no ground truth; every reduction skips them. Their
/// stored depth value is unspecified (conventionally 0).
class DepthMap {
 public:
  /// Throws InvalidArgument on size mismatch, non-positive depth_scale, or a
  /// valid pixel outside [0, 1].
  DepthMap(int width, int height, std::vector<double> depth, std::vector<std::uint8_t> valid,
           double depth_scale = 1.0);

  /// All pixels valid.
  DepthMap(int width, int height, std::vector<double> depth, double depth_scale = 1.0);

  static DepthMap constant(int width, int height, double value, double depth_scale = 1.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return depth_.size(); }
  double depth_scale() const noexcept { return depth_scale_; }

  std::span<const double> depth() const noexcept { return depth_; }
  std::span<const std::uint8_t> valid() const noexcept { return valid_; }

  double at(int x, int y) const noexcept { return depth_[index(x, y)]; }
  bool is_valid(std::size_t i) const noexcept { return valid_[i] != 0; }
  bool is_valid(int x, int y) const noexcept { return valid_[index(x, y)] != 0; }
  std::size_t valid_count() const noexcept;

  /// Depth values as a plane, ignoring the mask.
  Plane to_plane() const;

  template <typename Other>
  bool same_shape(const Other& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<double> depth_;
  std::vector<std::uint8_t> valid_;
  double depth_scale_;
};

/// Throws DimensionMismatch naming `what` unless both have the same width and height.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
  }
}

}  // namespace uwdepth
