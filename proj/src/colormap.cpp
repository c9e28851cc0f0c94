#include "uwdepth/colormap.hpp"

#include <algorithm>
#include <cmath>

namespace uwdepth {
namespace {

// Viridis sampled at nine evenly spaced stops.
constexpr std::array<std::array<double, 3>, 9> kStops = {{
    {68, 1, 84},
    {71, 44, 122},
    {59, 82, 139},
    {44, 114, 142},
    {33, 145, 140},
    {40, 174, 128},
    {94, 201, 98},
    {173, 220, 48},
    {253, 231, 37},
}};

}  // namespace

std::array<std::uint8_t, 3> colormap_lookup(double t) noexcept {
  if (!std::isfinite(t)) t = 0.0;
  const double scaled = std::clamp(t, 0.0, 1.0) * static_cast<double>(kStops.size() - 1);
  const auto lo = std::min(static_cast<std::size_t>(scaled), kStops.size() - 2);
  const double frac = scaled - static_cast<double>(lo);
  std::array<std::uint8_t, 3> out{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double v = kStops[lo][c] + frac * (kStops[lo + 1][c] - kStops[lo][c]);
    out[c] = static_cast<std::uint8_t>(std::lround(v));
  }
  return out;
}

}  // namespace uwdepth
