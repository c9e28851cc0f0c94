#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "uwdepth/image.hpp"
#include "uwdepth/rmi.hpp"

namespace uwdepth {

/// Affine attenuation prior d = mu0 + mu1 * R + mu2 * M with fit metadata.
struct ProjectionCoefficients {
  std::array<double, 3> mu{};
  std::int64_t pixel_count = 0;
  double residual_rmse = 0.0;
  double ridge = 0.0;
  double depth_scale = 1.0;
  IntensityDef intensity = kDefaultIntensity;
};

/// Coefficients reported for the large underwater RGB-D training corpus.
ProjectionCoefficients reference_coefficients();

/// Sufficient statistics of the least-squares fit over features (1, r, m).
///
/// A plain value: shards accumulate independently and combine with merge().
struct FitAccumulator {
  std::array<std::array<double, 3>, 3> xtx{};
  std::array<double, 3> xty{};
  double yty = 0.0;
  std::int64_t count = 0;

  friend bool operator==(const FitAccumulator&, const FitAccumulator&) = default;
};

/// Adds every valid depth pixel. Throws DimensionMismatch.
FitAccumulator accumulate(FitAccumulator acc, const RmiImage& rmi, const DepthMap& depth);

FitAccumulator merge(const FitAccumulator& a, const FitAccumulator& b) noexcept;

/// Sum over accumulated pixels of (d - mu . x)^2, evaluated from the stored sums.
double sum_squared_residual(const FitAccumulator& acc, const std::array<double, 3>& mu) noexcept;

/// Relative ridge weight; the absolute ridge is this times the pixel count.
inline constexpr double kRidgePerPixel = 1e-8;

/// Ridge-regularized normal-equation solve via 3x3 Cholesky.
/// Throws EmptyAccumulator when count is 0.
ProjectionCoefficients solve(const FitAccumulator& acc);

/// Per-pixel clamp(mu0 + mu1 r + mu2 m, 0, 1); all pixels valid.
/// Throws InvalidArgument for non-finite coefficients.
DepthMap predict_coarse(const RmiImage& rmi, const ProjectionCoefficients& coeffs);

/// Mean over a mask, with the number of contributing pixels.
struct MaskedMean {
  double value = 0.0;
  std::size_t count = 0;
  bool empty() const noexcept { return count == 0; }
};

/// Mean absolute deviation between the coarse prior and a prediction over
/// pixels valid in both; value 0 and empty() on an empty joint mask.
/// Throws DimensionMismatch.
MaskedMean projection_error(const DepthMap& coarse, const DepthMap& predicted);

/// JSON: {"mu": [..3], "pixel_count", "residual_rmse", "ridge", "depth_scale", "intensity_def"}.
void write_coefficients(const ProjectionCoefficients& coeffs, const std::filesystem::path& path);

/// Only "mu" is required. Throws IoError, FormatError.
ProjectionCoefficients read_coefficients(const std::filesystem::path& path);

}  // namespace uwdepth
