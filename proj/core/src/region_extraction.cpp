#include "hide/region_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hide/error.hpp"

namespace hide {
namespace {

// Union-find over raster indices with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so roots are raster-first members.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::int64_t floor_scaled(std::int64_t index, std::int64_t extent, std::int64_t cells) {
  return index * extent / cells;
}

std::int64_t ceil_scaled(std::int64_t index, std::int64_t extent, std::int64_t cells) {
  return (index * extent + cells - 1) / cells;
}

}  // namespace

void validate(const ThresholdConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (cfg.min_area < 1) throw ParameterError("min_area must be at least 1");
  if (cfg.connectivity != Connectivity::kFour && cfg.connectivity != Connectivity::kEight) {
    throw ParameterError("connectivity must be 4 or 8");
  }
}

int ConnectedComponent::min_row() const { return members.front().row; }
int ConnectedComponent::max_row() const { return members.back().row; }
int ConnectedComponent::min_col() const {
  return std::min_element(members.begin(), members.end(),
                          [](auto a, auto b) { return a.col < b.col; })->col;
}
int ConnectedComponent::max_col() const {
  return std::max_element(members.begin(), members.end(),
                          [](auto a, auto b) { return a.col < b.col; })->col;
}

BinaryMask binarize(const AttentionMap& map, const ThresholdConfig& cfg) {
  validate(cfg);
  BinaryMask mask(map.shape(), 0);
  if (map.empty()) return mask;
  const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(), map.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return mask;
  const double range = hi - lo;
  for (std::size_t i = 0; i < map.size(); ++i) {
    mask.values()[i] = ((map.values()[i] - lo) / range > cfg.alpha) ? 1 : 0;
  }
  return mask;
}

std::vector<ConnectedComponent> components(const BinaryMask& mask, const ThresholdConfig& cfg) {
  validate(cfg);
  const int rows = mask.rows();
  const int cols = mask.cols();
  DisjointSets sets(mask.size());
  const bool eight = cfg.connectivity == Connectivity::kEight;
  auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };

  // Single raster pass joining each set cell with its already-visited
  // neighbours (west, north-west, north, north-east).
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      if (c > 0 && mask(r, c - 1)) sets.unite(idx(r, c), idx(r, c - 1));
      if (r > 0) {
        if (mask(r - 1, c)) sets.unite(idx(r, c), idx(r - 1, c));
        if (eight && c > 0 && mask(r - 1, c - 1)) sets.unite(idx(r, c), idx(r - 1, c - 1));
        if (eight && c + 1 < cols && mask(r - 1, c + 1)) sets.unite(idx(r, c), idx(r - 1, c + 1));
      }
    }
  }

  std::vector<ConnectedComponent> out;
  std::vector<std::size_t> slot(mask.size(), SIZE_MAX);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      const auto root = sets.find(idx(r, c));
      if (slot[root] == SIZE_MAX) {
        slot[root] = out.size();
        out.emplace_back();
      }
      out[slot[root]].members.push_back({r, c});
    }
  }

  std::erase_if(out, [&](const ConnectedComponent& cc) {
    return static_cast<int>(cc.members.size()) < cfg.min_area;
  });
  // Components were created in order of their raster-first member; a stable
  // sort by (min row, min col) keeps that as the final tie-break.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int ar = a.min_row();
    const int br = b.min_row();
    if (ar != br) return ar < br;
    return a.min_col() < b.min_col();
  });
  return out;
}

BoundingBox component_to_box(const ConnectedComponent& c, const Geometry& g) {
  if (c.members.empty()) throw ValidationError("cannot box an empty component");
  const auto x1 = floor_scaled(c.min_col(), g.image_width, g.patch_cols);
  const auto x2 = ceil_scaled(c.max_col() + 1, g.image_width, g.patch_cols);
  const auto y1 = floor_scaled(c.min_row(), g.image_height, g.patch_rows);
  const auto y2 = ceil_scaled(c.max_row() + 1, g.image_height, g.patch_rows);
  return BoundingBox(static_cast<int>(std::max<std::int64_t>(x1, 0)),
                     static_cast<int>(std::max<std::int64_t>(y1, 0)),
                     static_cast<int>(std::min<std::int64_t>(x2, g.image_width)),
                     static_cast<int>(std::min<std::int64_t>(y2, g.image_height)));
}

std::vector<AttentionMap> localization_maps(const AttentionBundle& bundle,
                                            const ExtractionOptions& options) {
  validate(bundle);
  std::vector<AttentionMap> maps;
  maps.reserve(bundle.key_maps.size());
  if (bundle.purified) {
    for (const auto& tm : bundle.key_maps) maps.push_back(tm.map);
    return maps;
  }
  AttentionMap prior(bundle.geometry.grid(), 0.0F);
  if (options.subtract_noise_prior) {
    std::vector<AttentionMap> noise;
    for (const auto& tm : bundle.noise_maps) noise.push_back(tm.map);
    prior = noise_prior(noise, bundle.geometry.grid(), options.smoothing);
  }
  for (const auto& tm : bundle.key_maps) maps.push_back(purify(tm.map, prior, options.smoothing));
  return maps;
}

BoxSet extract_boxes(const AttentionBundle& bundle, const ExtractionOptions& options) {
  validate(options.threshold);
  const auto maps = localization_maps(bundle, options);
  BoxSet set{bundle.geometry.image_width, bundle.geometry.image_height, {}};
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto& token = bundle.key_maps[k].token.text;
    const auto mask = binarize(maps[k], options.threshold);
    for (const auto& cc : components(mask, options.threshold)) {
      auto box = component_to_box(cc, bundle.geometry);
      auto same = std::find_if(set.boxes.begin(), set.boxes.end(),
                               [&](const BoundingBox& b) { return b.same_rect(box); });
      if (same == set.boxes.end()) {
        box.tokens.push_back(token);
        set.boxes.push_back(std::move(box));
      } else if (std::find(same->tokens.begin(), same->tokens.end(), token) == same->tokens.end()) {
        same->tokens.push_back(token);
      }
    }
  }
  return set;
}

}  // namespace hide
