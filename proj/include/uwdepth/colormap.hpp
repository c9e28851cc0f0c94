#pragma once

#include <array>
#include <cstdint>

namespace uwdepth {

/// Viridis-like perceptually uniform ramp; t in [0, 1] (clamped), 0 dark, 1 bright.
std::array<std::uint8_t, 3> colormap_lookup(double t) noexcept;

}  // namespace uwdepth
