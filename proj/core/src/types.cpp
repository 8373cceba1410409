#include "hide/types.hpp"

#include <cmath>
#include <string>

namespace hide {
namespace {

void validate_plane(const TokenMap& tm, const Geometry& g, bool raw, const std::string& label) {
  if (tm.token.position < 0) {
    throw ValidationError(label + " ('" + tm.token.text + "') has negative token position");
  }
  if (tm.map.shape() != g.grid()) {
    throw ValidationError(label + " ('" + tm.token.text + "') has shape " +
                          std::to_string(tm.map.rows()) + "x" + std::to_string(tm.map.cols()) +
                          ", expected " + std::to_string(g.patch_rows) + "x" +
                          std::to_string(g.patch_cols));
  }
  double sum = 0.0;
  for (int r = 0; r < tm.map.rows(); ++r) {
    for (int c = 0; c < tm.map.cols(); ++c) {
      const float v = tm.map(r, c);
      if (!std::isfinite(v)) {
        throw ValidationError(label + " ('" + tm.token.text + "') has a non-finite value at row " +
                              std::to_string(r) + ", col " + std::to_string(c));
      }
      if (raw && v < 0.0F) {
        throw ValidationError(label + " ('" + tm.token.text + "') has a negative weight at row " +
                              std::to_string(r) + ", col " + std::to_string(c));
      }
      sum += v;
    }
  }
  if (raw && sum > 1.0 + 1e-4) {
    throw ValidationError(label + " ('" + tm.token.text + "') sums to " + std::to_string(sum) +
                          " > 1; raw attention must be a sub-distribution");
  }
}

}  // namespace

void validate(const Geometry& g) {
  if (g.patch_rows < 1 || g.patch_cols < 1) {
    throw ValidationError("patch grid must be at least 1x1");
  }
  if (g.image_width < g.patch_cols || g.image_height < g.patch_rows) {
    throw ValidationError("image must be at least as large as the patch grid");
  }
}

void validate(const AttentionBundle& bundle) {
  validate(bundle.geometry);
  if (bundle.key_maps.empty()) throw ValidationError("bundle has no key maps");
  if (bundle.purified && !bundle.noise_maps.empty()) {
    throw ValidationError("a purified bundle must not carry noise maps");
  }
  const bool raw = !bundle.purified;
  std::size_t plane = 0;
  for (const auto& tm : bundle.key_maps) {
    validate_plane(tm, bundle.geometry, raw, "plane " + std::to_string(plane++) + " (key token)");
  }
  for (const auto& tm : bundle.noise_maps) {
    validate_plane(tm, bundle.geometry, raw, "plane " + std::to_string(plane++) + " (noise token)");
  }
}

void validate(const BoxSet& set) {
  if (set.image_width < 1 || set.image_height < 1) {
    throw ValidationError("box set image dimensions must be positive");
  }
  for (std::size_t i = 0; i < set.boxes.size(); ++i) {
    const auto& b = set.boxes[i];
    if (!(0 <= b.x1 && b.x1 < b.x2 && b.x2 <= set.image_width && 0 <= b.y1 && b.y1 < b.y2 &&
          b.y2 <= set.image_height)) {
      throw ValidationError("box " + std::to_string(i) + " (" + std::to_string(b.x1) + "," +
                            std::to_string(b.y1) + "," + std::to_string(b.x2) + "," +
                            std::to_string(b.y2) + ") is empty or outside the " +
                            std::to_string(set.image_width) + "x" +
                            std::to_string(set.image_height) + " image");
    }
  }
}

}  // namespace hide
