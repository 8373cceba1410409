#pragma once

#include <span>
#include <vector>

#include "hide/types.hpp"

namespace hide {

/// Gaussian smoothing parameters, in patch units.
struct SmoothingConfig {
  double sigma = 3.0;

  /// Kernel half-width: ceil(3 * sigma).
  [[nodiscard]] int radius() const;
};

/// Normalized 1D Gaussian taps for offsets -radius..radius (sums to 1).
/// Throws ParameterError if sigma is not a positive finite number.
std::vector<double> gaussian_kernel(const SmoothingConfig& cfg);

/// Mirror index into [0, n): ... 1 0 | 0 1 .. n-1 | n-1 n-2 ...
/// Valid for any integer offset, including ones wider than the grid.
int reflect_index(int i, int n);

/// Separable convolution with the truncated, renormalized Gaussian of `cfg`,
/// using mirror padding at the borders.
AttentionMap gaussian_smooth(const AttentionMap& map, const SmoothingConfig& cfg);

/// Affine rescale to [0,1]. A constant map yields all zeros.
AttentionMap minmax_normalize(const AttentionMap& map);

/// Element-wise mean of minmax_normalize(gaussian_smooth(m)) over `noise_maps`.
/// An empty list yields a zero map of `shape`.
AttentionMap noise_prior(std::span<const AttentionMap> noise_maps, GridShape shape,
                         const SmoothingConfig& cfg);

/// minmax_normalize(gaussian_smooth(key_map)) - prior. Values lie in [-1, 1]
/// and negatives are kept.
AttentionMap purify(const AttentionMap& key_map, const AttentionMap& prior,
                    const SmoothingConfig& cfg);

/// Element-wise maximum of the normalized maps; for visualization only.
AttentionMap aggregate_overlay(std::span<const AttentionMap> maps);

/// Purifies every key map of a raw bundle against the prior of its noise maps.
/// The result is flagged purified and carries no noise maps.
AttentionBundle purify_bundle(const AttentionBundle& bundle, const SmoothingConfig& cfg);

}  // namespace hide
