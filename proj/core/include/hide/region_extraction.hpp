#pragma once

#include <cstdint>
#include <vector>

#include "hide/attention_ops.hpp"
#include "hide/types.hpp"

namespace hide {

enum class Connectivity { kFour = 4, kEight = 8 };

struct ThresholdConfig {
  double alpha = 0.7;
  Connectivity connectivity = Connectivity::kEight;
  int min_area = 1;  // in patches
};

/// Throws ParameterError unless alpha is in [0,1] and min_area >= 1.
void validate(const ThresholdConfig& cfg);

using BinaryMask = Grid<std::uint8_t>;

struct PatchCoord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const PatchCoord&, const PatchCoord&) = default;
};

/// Connected set of mask cells, members sorted row-major.
struct ConnectedComponent {
  std::vector<PatchCoord> members;

  [[nodiscard]] int min_row() const;
  [[nodiscard]] int max_row() const;
  [[nodiscard]] int min_col() const;
  [[nodiscard]] int max_col() const;
};

/// mask = minmax_normalize(map) > alpha (strict).
BinaryMask binarize(const AttentionMap& map, const ThresholdConfig& cfg);

/// Maximal connected sets of set cells under `cfg.connectivity`, dropping
/// components smaller than `cfg.min_area`. Sorted by (min row, min col, first
/// member in raster order).
std::vector<ConnectedComponent> components(const BinaryMask& mask, const ThresholdConfig& cfg);

/// Tight patch box of `c` scaled to pixels: x1 = floor(min_col * W / cols),
/// x2 = ceil((max_col + 1) * W / cols), likewise for y, clipped to the image.
/// Exact integer arithmetic.
BoundingBox component_to_box(const ConnectedComponent& c, const Geometry& geometry);

struct ExtractionOptions {
  SmoothingConfig smoothing;
  ThresholdConfig threshold;
  /// When false the key maps are only smoothed and normalized; the noise prior
  /// is not subtracted.
  bool subtract_noise_prior = true;
};

/// The maps that will be thresholded for each key token, in key order.
/// Purified bundles are passed through untouched.
std::vector<AttentionMap> localization_maps(const AttentionBundle& bundle,
                                            const ExtractionOptions& options);

/// Boxes for every key token of `bundle`, unioned across tokens. Identical
/// rectangles are merged and carry every contributing token.
BoxSet extract_boxes(const AttentionBundle& bundle, const ExtractionOptions& options);

}  // namespace hide
