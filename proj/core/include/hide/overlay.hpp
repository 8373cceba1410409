#pragma once

#include "hide/image.hpp"
#include "hide/types.hpp"

namespace hide {

/// Weight of the heat color in overlay blending: out = (1-a)*pixel + a*heat.
inline constexpr double kOverlayAlpha = 0.5;

/// "Hot" colormap: black -> red -> yellow -> white over [0, 1].
Rgb heat_color(double v);

/// Upsamples `map` (values in [0,1]) to the image size by nearest neighbour
/// (pixel x reads patch floor(x * cols / width)) and alpha-blends its heat
/// colors over `image`. Output has the dimensions of `image`.
Image render_overlay(const Image& image, const AttentionMap& map, double alpha = kOverlayAlpha);

}  // namespace hide
