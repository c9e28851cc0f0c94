#include "uwdepth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace uwdepth {
namespace {

constexpr std::size_t kBlock = 4096;

struct Partial {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double sq = 0.0;
  double log10 = 0.0;
  std::size_t valid = 0;
  std::size_t ratio = 0;
};

}  // namespace

MetricReport evaluate_values(std::span<const double> pred, std::span<const double> gt,
                             std::span<const std::uint8_t> valid, double log_floor) {
  if (pred.size() != gt.size() || pred.size() != valid.size()) {
    throw DimensionMismatch("evaluate: arrays of different length (" +
                            std::to_string(pred.size()) + ", " + std::to_string(gt.size()) +
                            ", " + std::to_string(valid.size()) + ")");
  }
  std::vector<Partial> blocks((pred.size() + kBlock - 1) / kBlock);
  for (std::size_t blk = 0; blk < blocks.size(); ++blk) {
    Partial& part = blocks[blk];
    const std::size_t end = std::min(pred.size(), (blk + 1) * kBlock);
    for (std::size_t k = blk * kBlock; k < end; ++k) {
      if (valid[k] == 0) continue;
      const double d = gt[k];
      const double e = d - pred[k];
      part.sq += e * e;
      ++part.valid;
      if (d > log_floor) {
        part.abs_rel += std::abs(e) / d;
        part.sq_rel += e * e / d;
        part.log10 += std::abs(std::log10(d) - std::log10(std::max(pred[k], log_floor)));
        ++part.ratio;
      }
    }
  }
  Partial total;
  for (const Partial& part : blocks) {
    total.abs_rel += part.abs_rel;
    total.sq_rel += part.sq_rel;
    total.sq += part.sq;
    total.log10 += part.log10;
    total.valid += part.valid;
    total.ratio += part.ratio;
  }

  MetricReport report;
  report.valid_pixels = total.valid;
  report.ratio_pixels = total.ratio;
  if (total.valid > 0) {
    report.rmse = std::sqrt(total.sq / static_cast<double>(total.valid));
  }
  if (total.ratio > 0) {
    const double n = static_cast<double>(total.ratio);
    report.abs_rel = total.abs_rel / n;
    report.sq_rel = total.sq_rel / n;
    report.log10 = total.log10 / n;
  }
  return report;
}

MetricReport evaluate(const DepthMap& pred, const DepthMap& gt, double log_floor) {
  require_same_shape(pred, gt, "evaluate");
  std::vector<std::uint8_t> joint(pred.size());
  for (std::size_t k = 0; k < joint.size(); ++k) {
    joint[k] = pred.is_valid(k) && gt.is_valid(k) ? 1 : 0;
  }
  MetricReport report = evaluate_values(pred.depth(), gt.depth(), joint, log_floor);
  if (report.empty()) {
    throw EmptyMask("evaluate: no pixel is valid in both maps");
  }
  return report;
}

MetricReport mean_report(std::span<const MetricReport> reports) {
  MetricReport out;
  std::size_t n = 0;
  for (const MetricReport& r : reports) {
    if (r.empty()) continue;
    out.abs_rel += r.abs_rel;
    out.sq_rel += r.sq_rel;
    out.rmse += r.rmse;
    out.log10 += r.log10;
    out.valid_pixels += r.valid_pixels;
    out.ratio_pixels += r.ratio_pixels;
    ++n;
  }
  if (n > 0) {
    const double count = static_cast<double>(n);
    out.abs_rel /= count;
    out.sq_rel /= count;
    out.rmse /= count;
    out.log10 /= count;
  }
  return out;
}

}  // namespace uwdepth
