#pragma once

#include "uwdepth/image.hpp"

namespace uwdepth {

struct GuidedFilterConfig {
  int radius = 8;
  double epsilon = 1e-4;
};

/// Throws InvalidArgument unless radius >= 1 and epsilon > 0.
void validate(const GuidedFilterConfig& config);

/// Mean over the (2r+1)x(2r+1) window clipped to the image bounds.
///
/// Summed-area table over values offset by the first pixel, so cost does not
/// depend on the radius and a constant plane maps to itself exactly.
/// Throws InvalidArgument for radius < 1.
Plane box_filter(const Plane& input, int radius);

/// Filters depth values (mask ignored) and passes the mask through.
DepthMap box_filter(const DepthMap& input, int radius);

/// Edge-preserving smoothing of `input` steered by `guide`:
///   a = cov(guide, input) / (var(guide) + eps), b = mean(input) - a mean(guide),
///   output = mean(a) guide + mean(b), clamped to [0, 1].
/// The validity mask is passed through. Throws DimensionMismatch, InvalidArgument.
DepthMap guided_filter(const DepthMap& input, const Plane& guide, const GuidedFilterConfig& config);

}  // namespace uwdepth
