#pragma once

#include <optional>
#include <string_view>

namespace hide {

/// Per-model-family defaults for extraction layer, smoothing and threshold.
struct ModelPreset {
  std::string_view name;
  int layer;
  double sigma;
  double alpha;
};

inline constexpr ModelPreset kQwenPreset{"qwen", 15, 3.0, 0.7};
inline constexpr ModelPreset kInternVlPreset{"internvl", 17, 2.0, 0.6};

inline std::optional<ModelPreset> find_preset(std::string_view name) {
  if (name == kQwenPreset.name) return kQwenPreset;
  if (name == kInternVlPreset.name) return kInternVlPreset;
  return std::nullopt;
}

}  // namespace hide
