#include "uwdepth/rmi.hpp"

#include <algorithm>

namespace uwdepth {

const char* intensity_name(IntensityDef def) noexcept {
  switch (def) {
    case IntensityDef::kRec601:
      return "rec601";
    case IntensityDef::kMean:
      return "mean";
  }
  return "rec601";
}

IntensityDef parse_intensity(const std::string& name) {
  if (name == "rec601") return IntensityDef::kRec601;
  if (name == "mean") return IntensityDef::kMean;
  throw InvalidArgument("unknown intensity definition '" + name + "'");
}

Rmi rmi_pixel(const Rgb& p, IntensityDef intensity) noexcept {
  double i = 0.0;
  if (intensity == IntensityDef::kMean) {
    i = (p.r + p.g + p.b) / 3.0;
  } else {
    i = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  }
  // Weighted means can round a hair outside the channel range (gray pixels).
  const double lo = std::min({p.r, p.g, p.b});
  const double hi = std::max({p.r, p.g, p.b});
  return Rmi{p.r, std::max(p.g, p.b), std::clamp(i, lo, hi)};
}

RmiImage rmi_transform(const RgbImage& image, IntensityDef intensity) {
  std::vector<Rmi> out(image.size());
  const auto src = image.pixels();
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = rmi_pixel(src[k], intensity);
  }
  return RmiImage(image.width(), image.height(), std::move(out));
}

Plane intensity_plane(const RmiImage& image) {
  std::vector<double> values(image.size());
  const auto src = image.pixels();
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = src[k].i;
  return Plane(image.width(), image.height(), std::move(values));
}

}  // namespace uwdepth
