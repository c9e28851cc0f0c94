#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "uwdepth/image.hpp"

namespace uwdepth {

/// Standard depth-error metrics; all lower-is-better.
struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double log10 = 0.0;
  /// Pixels valid in both maps (the RMSE population).
  std::size_t valid_pixels = 0;
  /// Subset with ground truth above the log floor (ratio and log10 population).
  std::size_t ratio_pixels = 0;

  bool empty() const noexcept { return valid_pixels == 0; }
};

inline constexpr double kDefaultLogFloor = 1e-6;

/// Core reduction over raw arrays in arbitrary (positive) units. Pixels with
/// gt <= log_floor are excluded from abs_rel, sq_rel and log10 but kept for
/// rmse; predictions are floored at log_floor inside log10. Sums are taken in
/// fixed-size blocks combined in order, so results are reproducible.
/// An empty mask yields an empty() report. Throws DimensionMismatch on length mismatch.
MetricReport evaluate_values(std::span<const double> pred, std::span<const double> gt,
                             std::span<const std::uint8_t> valid,
                             double log_floor = kDefaultLogFloor);

/// Joint-valid evaluation of two depth maps. Throws DimensionMismatch, EmptyMask.
MetricReport evaluate(const DepthMap& pred, const DepthMap& gt,
                      double log_floor = kDefaultLogFloor);

/// Unweighted mean of per-image reports, skipping empty ones; pixel counts are summed.
MetricReport mean_report(std::span<const MetricReport> reports);

}  // namespace uwdepth
