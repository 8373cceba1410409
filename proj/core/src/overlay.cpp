#include "hide/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "hide/error.hpp"

namespace hide {
namespace {

std::uint8_t channel(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Rgb heat_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return {channel(3.0 * v), channel(3.0 * v - 1.0), channel(3.0 * v - 2.0)};
}

Image render_overlay(const Image& image, const AttentionMap& map, double alpha) {
  if (map.empty()) throw ValidationError("overlay map is empty");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("overlay alpha must lie in [0, 1]");
  Image out(image.width(), image.height());
  const auto w = static_cast<std::int64_t>(image.width());
  const auto h = static_cast<std::int64_t>(image.height());
  for (int y = 0; y < image.height(); ++y) {
    const int row = static_cast<int>(y * static_cast<std::int64_t>(map.rows()) / h);
    for (int x = 0; x < image.width(); ++x) {
      const int col = static_cast<int>(x * static_cast<std::int64_t>(map.cols()) / w);
      const Rgb heat = heat_color(map(row, col));
      const Rgb px = image.at(x, y);
      auto blend = [alpha](std::uint8_t a, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround((1.0 - alpha) * a + alpha * b));
      };
      out.set(x, y, {blend(px.r, heat.r), blend(px.g, heat.g), blend(px.b, heat.b)});
    }
  }
  return out;
}

}  // namespace hide
