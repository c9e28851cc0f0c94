#include "uwdepth/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "uwdepth/projection.hpp"

namespace uwdepth {
namespace {

void check_pair(const DepthMap& pred, const DepthMap& gt, const char* what) {
  require_same_shape(pred, gt, what);
}

bool joint_valid(const DepthMap& a, const DepthMap& b, std::size_t k) noexcept {
  return a.is_valid(k) && b.is_valid(k);
}

}  // namespace

const char* l2_mode_name(L2Mode mode) noexcept {
  return mode == L2Mode::kMeanSquared ? "mean-squared" : "mean-absolute";
}

void validate(const LossConfig& c) {
  if (c.w_l2 < 0.0 || c.w_silog < 0.0 || c.w_proj < 0.0) {
    throw InvalidArgument("loss weights must be non-negative");
  }
  if (!(c.silog_alpha > 0.0)) throw InvalidArgument("silog alpha must be > 0");
  if (!(c.silog_lambda >= 0.0 && c.silog_lambda <= 1.0)) {
    throw InvalidArgument("silog lambda must lie in [0, 1]");
  }
  if (!(c.log_floor > 0.0)) throw InvalidArgument("log floor must be > 0");
}

double l2_loss(const DepthMap& pred, const DepthMap& gt, L2Mode mode) {
  check_pair(pred, gt, "l2_loss");
  const auto p = pred.depth();
  const auto d = gt.depth();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!joint_valid(pred, gt, k)) continue;
    const double r = d[k] - p[k];
    sum += mode == L2Mode::kMeanSquared ? r * r : std::abs(r);
    ++n;
  }
  if (n == 0) throw EmptyMask("l2_loss: no pixel is valid in both maps");
  return sum / static_cast<double>(n);
}

SilogTerms silog_terms(const DepthMap& pred, const DepthMap& gt, const LossConfig& config) {
  validate(config);
  check_pair(pred, gt, "silog_loss");
  const auto p = pred.depth();
  const auto d = gt.depth();
  std::vector<double> g;
  g.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!joint_valid(pred, gt, k)) continue;
    g.push_back(std::log(std::max(p[k], config.log_floor)) -
                std::log(std::max(d[k], config.log_floor)));
  }
  if (g.empty()) throw EmptyMask("silog_loss: no pixel is valid in both maps");

  const double t = static_cast<double>(g.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : g) {
    sum += v;
    sum_sq += v * v;
  }
  SilogTerms terms;
  terms.count = g.size();
  terms.mean_g = sum / t;
  terms.mean_g2 = sum_sq / t;
  double centred = 0.0;
  for (double v : g) centred += (v - terms.mean_g) * (v - terms.mean_g);
  terms.radicand =
      centred / t + (1.0 - config.silog_lambda) * terms.mean_g * terms.mean_g;
  if (terms.radicand < 0.0) {
    terms.radicand = 0.0;
    terms.clamped = true;
  }
  return terms;
}

double silog_loss(const DepthMap& pred, const DepthMap& gt, const LossConfig& config) {
  return config.silog_alpha * std::sqrt(silog_terms(pred, gt, config).radicand);
}

ObjectiveBreakdown combined_objective(const DepthMap& pred, const DepthMap& gt,
                                      const DepthMap& coarse, const LossConfig& config) {
  validate(config);
  require_same_shape(pred, coarse, "combined_objective");
  ObjectiveBreakdown out;
  out.l2_mode = config.l2_mode;
  out.l2 = l2_loss(pred, gt, config.l2_mode);
  out.silog = silog_loss(pred, gt, config);
  const MaskedMean proj = projection_error(coarse, pred);
  out.projection = proj.value;
  out.projection_empty = proj.empty();
  out.total = config.w_l2 * out.l2 + config.w_silog * out.silog + config.w_proj * out.projection;
  return out;
}

}  // namespace uwdepth
