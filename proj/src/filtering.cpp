#include "uwdepth/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace uwdepth {
namespace {

// Box means over clipped windows, sharing window geometry and the
// summed-area scratch buffer across passes.
class BoxMean {
 public:
  BoxMean(int width, int height, int radius)
      : width_(width),
        height_(height),
        x0_(static_cast<std::size_t>(width)),
        x1_(static_cast<std::size_t>(width)),
        y0_(static_cast<std::size_t>(height)),
        y1_(static_cast<std::size_t>(height)),
        table_(static_cast<std::size_t>(width + 1) * static_cast<std::size_t>(height + 1), 0.0) {
    for (int x = 0; x < width; ++x) {
      x0_[x] = std::max(0, x - radius);
      x1_[x] = std::min(width, x + radius + 1);
    }
    for (int y = 0; y < height; ++y) {
      y0_[y] = std::max(0, y - radius);
      y1_[y] = std::min(height, y + radius + 1);
    }
  }

  void operator()(std::span<const double> in, std::span<double> out) {
    const double pivot = in[0];
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    for (int y = 0; y < height_; ++y) {
      const double* src = in.data() + static_cast<std::size_t>(y) * width_;
      const double* above = table_.data() + static_cast<std::size_t>(y) * stride;
      double* row = table_.data() + static_cast<std::size_t>(y + 1) * stride;
      double running = 0.0;
      for (int x = 0; x < width_; ++x) {
        running += src[x] - pivot;
        row[x + 1] = above[x + 1] + running;
      }
    }
    for (int y = 0; y < height_; ++y) {
      const double* top = table_.data() + static_cast<std::size_t>(y0_[y]) * stride;
      const double* bottom = table_.data() + static_cast<std::size_t>(y1_[y]) * stride;
      const int rows = y1_[y] - y0_[y];
      double* dst = out.data() + static_cast<std::size_t>(y) * width_;
      for (int x = 0; x < width_; ++x) {
        const int a = x0_[x];
        const int b = x1_[x];
        const double sum = bottom[b] - bottom[a] - top[b] + top[a];
        dst[x] = pivot + sum / static_cast<double>(rows * (b - a));
      }
    }
  }

 private:
  int width_;
  int height_;
  std::vector<int> x0_, x1_, y0_, y1_;
  std::vector<double> table_;
};

void check_radius(int radius) {
  if (radius < 1) {
    throw InvalidArgument("box filter radius must be >= 1, got " + std::to_string(radius));
  }
}

}  // namespace

void validate(const GuidedFilterConfig& config) {
  check_radius(config.radius);
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw InvalidArgument("guided filter epsilon must be > 0");
  }
}

Plane box_filter(const Plane& input, int radius) {
  check_radius(radius);
  std::vector<double> out(input.size());
  BoxMean(input.width(), input.height(), radius)(input.pixels(), out);
  return Plane(input.width(), input.height(), std::move(out));
}

DepthMap box_filter(const DepthMap& input, int radius) {
  check_radius(radius);
  std::vector<double> out(input.size());
  BoxMean(input.width(), input.height(), radius)(input.depth(), out);
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return DepthMap(input.width(), input.height(), std::move(out),
                  std::vector<std::uint8_t>(input.valid().begin(), input.valid().end()),
                  input.depth_scale());
}

DepthMap guided_filter(const DepthMap& input, const Plane& guide, const GuidedFilterConfig& config) {
  validate(config);
  require_same_shape(input, guide, "guided_filter");
  const std::size_t n = input.size();
  const auto p = input.depth();
  const auto g = guide.pixels();

  // Centre both signals on their first pixel; covariance and variance are
  // shift-invariant and a constant signal becomes exactly zero.
  const double p0 = p[0];
  const double g0 = g[0];
  std::vector<double> gc(n), pc(n), gp(n), gg(n);
  for (std::size_t k = 0; k < n; ++k) {
    gc[k] = g[k] - g0;
    pc[k] = p[k] - p0;
    gp[k] = gc[k] * pc[k];
    gg[k] = gc[k] * gc[k];
  }

  BoxMean mean(input.width(), input.height(), config.radius);
  std::vector<double> mean_g(n), mean_p(n), mean_gp(n), mean_gg(n);
  mean(gc, mean_g);
  mean(pc, mean_p);
  mean(gp, mean_gp);
  mean(gg, mean_gg);

  std::vector<double>& a = gp;  // reuse scratch
  std::vector<double>& b = gg;
  for (std::size_t k = 0; k < n; ++k) {
    const double cov = mean_gp[k] - mean_g[k] * mean_p[k];
    const double var = std::max(0.0, mean_gg[k] - mean_g[k] * mean_g[k]);
    a[k] = cov / (var + config.epsilon);
    b[k] = (mean_p[k] + p0) - a[k] * (mean_g[k] + g0);
  }

  std::vector<double>& mean_a = mean_g;
  std::vector<double>& mean_b = mean_p;
  mean(a, mean_a);
  mean(b, mean_b);

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::clamp(mean_a[k] * g[k] + mean_b[k], 0.0, 1.0);
  }
  return DepthMap(input.width(), input.height(), std::move(out),
                  std::vector<std::uint8_t>(input.valid().begin(), input.valid().end()),
                  input.depth_scale());
}

}  // namespace uwdepth
