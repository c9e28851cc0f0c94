#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uwdepth/filtering.hpp"
#include "uwdepth/image.hpp"
#include "uwdepth/projection.hpp"
#include "uwdepth/rmi.hpp"

namespace uwdepth {

/// Coarse depth from a single RGB frame: RMI transform, affine prior, and an
/// optional guided-filter pass.
struct CoarseDepthResult {
  RmiImage rmi;
  DepthMap coarse;
  std::optional<DepthMap> filtered;

  const DepthMap& final_depth() const noexcept { return filtered ? *filtered : coarse; }
};

/// When `filter` is set the guide is `mask` if given, else the RMI intensity
/// channel. Throws DimensionMismatch if the mask does not match the image.
CoarseDepthResult coarse_depth(const RgbImage& image, const ProjectionCoefficients& coeffs,
                               const std::optional<GuidedFilterConfig>& filter,
                               const Plane* mask = nullptr);

struct BenchConfig {
  int width = 640;
  int height = 480;
  int iterations = 100;
  int warmup = 10;
  bool filter = true;
  GuidedFilterConfig filter_config;
  std::uint64_t seed = 7;
};

struct StageTiming {
  std::string name;
  double mean_ms = 0.0;
  double median_ms = 0.0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<StageTiming> stages;
  StageTiming end_to_end;
  double fps = 0.0;
  /// Sum of per-stage means divided by the end-to-end mean.
  double stage_sum_ratio = 0.0;
};

/// Times the pipeline on a fixed-seed synthetic frame, single-threaded.
/// Throws InvalidArgument for iterations < 10 or non-positive sizes.
BenchReport run_benchmark(const BenchConfig& config);

}  // namespace uwdepth
