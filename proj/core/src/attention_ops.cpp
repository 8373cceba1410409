#include "hide/attention_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hide/error.hpp"

namespace hide {
namespace {

void require_same_shape(const AttentionMap& a, const AttentionMap& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ValidationError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ")");
  }
}

// Normalization carried out in double and rounded once on output.
std::vector<double> normalized_values(const AttentionMap& map) {
  std::vector<double> out(map.size(), 0.0);
  if (map.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(), map.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (map.values()[i] - lo) / range;
  return out;
}

}  // namespace

int SmoothingConfig::radius() const { return static_cast<int>(std::ceil(3.0 * sigma)); }

std::vector<double> gaussian_kernel(const SmoothingConfig& cfg) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw ParameterError("gaussian sigma must be a positive finite number");
  }
  const int r = cfg.radius();
  std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
  const double denom = 2.0 * cfg.sigma * cfg.sigma;
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    const double w = std::exp(-static_cast<double>(k) * k / denom);
    taps[static_cast<std::size_t>(k + r)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

AttentionMap gaussian_smooth(const AttentionMap& map, const SmoothingConfig& cfg) {
  const auto taps = gaussian_kernel(cfg);
  const int r = cfg.radius();
  const int rows = map.rows();
  const int cols = map.cols();
  if (map.empty()) return map;

  // Horizontal pass into a double buffer, then vertical pass.
  std::vector<double> tmp(map.size());
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] * map(y, reflect_index(x + k, cols));
      }
      tmp[static_cast<std::size_t>(y) * cols + x] = acc;
    }
  }
  AttentionMap out(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] *
               tmp[static_cast<std::size_t>(reflect_index(y + k, rows)) * cols + x];
      }
      out(y, x) = static_cast<float>(acc);
    }
  }
  return out;
}

AttentionMap minmax_normalize(const AttentionMap& map) {
  const auto norm = normalized_values(map);
  AttentionMap out(map.shape());
  std::transform(norm.begin(), norm.end(), out.values().begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

AttentionMap noise_prior(std::span<const AttentionMap> noise_maps, GridShape shape,
                         const SmoothingConfig& cfg) {
  gaussian_kernel(cfg);
  AttentionMap out(shape);
  if (noise_maps.empty()) return out;
  std::vector<double> acc(shape.size(), 0.0);
  for (const auto& m : noise_maps) {
    if (m.shape() != shape) require_same_shape(m, out, "noise_prior");
    const auto norm = normalized_values(gaussian_smooth(m, cfg));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += norm[i];
  }
  const double n = static_cast<double>(noise_maps.size());
  std::transform(acc.begin(), acc.end(), out.values().begin(),
                 [n](double v) { return static_cast<float>(v / n); });
  return out;
}

AttentionMap purify(const AttentionMap& key_map, const AttentionMap& prior,
                    const SmoothingConfig& cfg) {
  require_same_shape(key_map, prior, "purify");
  const auto norm = minmax_normalize(gaussian_smooth(key_map, cfg));
  AttentionMap out(key_map.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = norm.values()[i] - prior.values()[i];
  }
  return out;
}

AttentionMap aggregate_overlay(std::span<const AttentionMap> maps) {
  if (maps.empty()) throw ValidationError("aggregate_overlay needs at least one map");
  AttentionMap out(maps.front().shape(), 0.0F);
  for (const auto& m : maps) {
    require_same_shape(m, maps.front(), "aggregate_overlay");
    const auto norm = minmax_normalize(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.values()[i] = std::max(out.values()[i], norm.values()[i]);
    }
  }
  return out;
}

AttentionBundle purify_bundle(const AttentionBundle& bundle, const SmoothingConfig& cfg) {
  validate(bundle);
  if (bundle.purified) throw ValidationError("bundle is already purified");
  std::vector<AttentionMap> noise;
  noise.reserve(bundle.noise_maps.size());
  for (const auto& tm : bundle.noise_maps) noise.push_back(tm.map);
  const auto prior = noise_prior(noise, bundle.geometry.grid(), cfg);

  AttentionBundle out;
  out.geometry = bundle.geometry;
  out.layer = bundle.layer;
  out.purified = true;
  for (const auto& tm : bundle.key_maps) out.key_maps.push_back({tm.token, purify(tm.map, prior, cfg)});
  return out;
}

}  // namespace hide
