#pragma once

#include <cstddef>

#include "uwdepth/image.hpp"

namespace uwdepth {

/// How the pixel-wise L2 term reduces a scalar residual.
enum class L2Mode {
  kMeanAbsolute,  // mean |d - d_hat|, the norm of a scalar residual
  kMeanSquared,   // mean (d - d_hat)^2
};

const char* l2_mode_name(L2Mode mode) noexcept;

struct LossConfig {
  double silog_lambda = 0.85;
  double silog_alpha = 10.0;
  double w_l2 = 0.3;
  double w_silog = 0.6;
  double w_proj = 0.1;
  double log_floor = 1e-6;
  L2Mode l2_mode = L2Mode::kMeanAbsolute;
};

/// Throws InvalidArgument when a weight is negative, alpha <= 0,
/// lambda outside [0, 1] or log_floor <= 0.
void validate(const LossConfig& config);

/// Reduction over pixels valid in both maps. Throws DimensionMismatch, EmptyMask.
double l2_loss(const DepthMap& pred, const DepthMap& gt, L2Mode mode = L2Mode::kMeanAbsolute);

/// Intermediate statistics of the scale-invariant log loss, g = ln(pred) - ln(gt).
struct SilogTerms {
  double mean_g = 0.0;
  double mean_g2 = 0.0;
  /// (1/T) sum g^2 - (lambda/T^2) (sum g)^2, computed as the centred second
  /// moment plus (1 - lambda) mean^2 so it stays non-negative for lambda <= 1.
  double radicand = 0.0;
  std::size_t count = 0;
  /// Set when rounding drove the radicand below zero and it was clamped.
  bool clamped = false;
};

SilogTerms silog_terms(const DepthMap& pred, const DepthMap& gt, const LossConfig& config);

/// alpha * sqrt(radicand). Throws DimensionMismatch, EmptyMask.
double silog_loss(const DepthMap& pred, const DepthMap& gt, const LossConfig& config = {});

struct ObjectiveBreakdown {
  double total = 0.0;
  double l2 = 0.0;
  double silog = 0.0;
  double projection = 0.0;
  L2Mode l2_mode = L2Mode::kMeanAbsolute;
  /// True when pred and coarse share no valid pixel (projection term is 0).
  bool projection_empty = false;
};

/// w_l2 L2 + w_silog SILog + w_proj projection_error(coarse, pred); unweighted
/// terms are reported alongside. Throws DimensionMismatch, EmptyMask.
ObjectiveBreakdown combined_objective(const DepthMap& pred, const DepthMap& gt,
                                      const DepthMap& coarse, const LossConfig& config = {});

}  // namespace uwdepth
