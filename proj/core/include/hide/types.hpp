#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hide/grid.hpp"

namespace hide {

/// A prompt token whose attention plane is carried by a bundle.
struct TokenRef {
  std::string text;
  std::int64_t position = 0;

  friend bool operator==(const TokenRef&, const TokenRef&) = default;
};

/// One patch-grid plane of attention weights for a single text token.
/// Stored at the precision of the on-disk format so that files round-trip
/// bit-exactly; arithmetic on maps is carried out in double.
using AttentionMap = Grid<float>;

struct TokenMap {
  TokenRef token;
  AttentionMap map;

  friend bool operator==(const TokenMap&, const TokenMap&) = default;
};

/// Image size in pixels together with the patch grid laid over it.
struct Geometry {
  int image_width = 0;
  int image_height = 0;
  int patch_rows = 0;
  int patch_cols = 0;

  [[nodiscard]] GridShape grid() const { return {patch_rows, patch_cols}; }
  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Per-token attention planes for one image at one layer.
///
/// `key_maps` ground the key-information tokens; `noise_maps` come from the
/// semantically irrelevant tokens of a generic search prompt and feed the
/// background prior. A bundle flagged `purified` holds already purified key
/// maps (which may be negative) and no noise maps.
struct AttentionBundle {
  Geometry geometry;
  int layer = 0;
  std::vector<TokenMap> key_maps;
  std::vector<TokenMap> noise_maps;
  bool purified = false;

  friend bool operator==(const AttentionBundle&, const AttentionBundle&) = default;
};

/// Axis-aligned half-open pixel rectangle [x1,x2) x [y1,y2).
///
/// `tokens` lists every key token whose map produced this exact rectangle;
/// identical rectangles from different tokens are merged into one box.
struct BoundingBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;
  std::vector<std::string> tokens;

  BoundingBox() = default;
  BoundingBox(int x1_, int y1_, int x2_, int y2_, std::vector<std::string> tokens_ = {})
      : x1(x1_), y1(y1_), x2(x2_), y2(y2_), tokens(std::move(tokens_)) {}

  [[nodiscard]] int width() const { return x2 - x1; }
  [[nodiscard]] int height() const { return y2 - y1; }
  [[nodiscard]] std::int64_t area() const {
    return static_cast<std::int64_t>(width()) * static_cast<std::int64_t>(height());
  }
  [[nodiscard]] bool same_rect(const BoundingBox& o) const {
    return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
  }
  [[nodiscard]] bool contains(int x, int y) const { return x >= x1 && x < x2 && y >= y1 && y < y2; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct BoxSet {
  int image_width = 0;
  int image_height = 0;
  std::vector<BoundingBox> boxes;

  [[nodiscard]] bool empty() const { return boxes.empty(); }
  friend bool operator==(const BoxSet&, const BoxSet&) = default;
};

// Invariant checks. Each throws ValidationError naming the offending item.
void validate(const Geometry& geometry);
void validate(const AttentionBundle& bundle);
void validate(const BoxSet& boxes);

}  // namespace hide

namespace hide {

/// Where one copied rectangle of a source image landed in a recomposed image.
struct CellProvenance {
  int src_x1 = 0;
  int src_y1 = 0;
  int src_x2 = 0;
  int src_y2 = 0;
  int dst_x = 0;
  int dst_y = 0;

  friend bool operator==(const CellProvenance&, const CellProvenance&) = default;
};

}  // namespace hide
