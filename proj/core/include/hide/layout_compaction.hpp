#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hide/image.hpp"
#include "hide/types.hpp"

namespace hide {

/// Canonical grid induced by the box edges plus the image border.
///
/// Column interval i spans [xs[i], xs[i+1]); it is kept when some box
/// intersects it. `x_map[i]` is the destination x of grid line i, i.e. the
/// summed width of kept columns left of it, so `x_map.back() == new_width`.
/// Rows are analogous.
struct GridDecomposition {
  std::vector<int> xs;
  std::vector<int> ys;
  std::vector<bool> column_kept;
  std::vector<bool> row_kept;
  std::vector<int> x_map;
  std::vector<int> y_map;
  /// cell_content[j * columns() + i] for column i, row j.
  std::vector<bool> cell_content;
  int new_width = 0;
  int new_height = 0;

  [[nodiscard]] int columns() const { return static_cast<int>(xs.size()) - 1; }
  [[nodiscard]] int rows() const { return static_cast<int>(ys.size()) - 1; }
  [[nodiscard]] bool content(int i, int j) const {
    return cell_content[static_cast<std::size_t>(j) * columns() + i];
  }
};

/// Throws ValidationError if any box is outside width x height.
GridDecomposition build_grid(const BoxSet& boxes, int width, int height);

/// True iff cell (i, j) has a non-empty intersection with some box.
/// Throws DomainError for indices outside the grid.
bool is_content_cell(int i, int j, const BoxSet& boxes, const GridDecomposition& grid);

/// Destination of pixel (x, y). Throws DomainError if the pixel is outside the
/// image or lies in a dropped column or row.
std::pair<int, int> transform_point(int x, int y, const GridDecomposition& grid);

/// Image of a box under transform_point (half-open corners mapped through the
/// last covered pixel).
BoundingBox transform_box(const BoundingBox& box, const GridDecomposition& grid);

struct CompactImage {
  Image image;
  std::vector<CellProvenance> provenance;
  /// Set when there were no boxes and `image` is the original image.
  bool degenerate = false;
};

/// Copies every content cell to its compacted position; blank crossings of
/// kept rows and columns are painted with `fill`. With no boxes the input is
/// returned unchanged and flagged degenerate.
CompactImage compact_image(const Image& image, const BoxSet& boxes, Rgb fill = kDefaultFill);

enum class RecomposeMode {
  kSequenceTiling,  // crops left to right in scan order of box origins
  kRandomTiling,    // same crops, seeded shuffle
  kMasking,         // original size, everything outside boxes filled
  kLayoutNoCompaction,  // compact layout padded to the original size
  kLayoutCompact,   // compact_image
};

struct RecomposeOptions {
  Rgb fill = kDefaultFill;
  std::uint64_t seed = 0;
};

CompactImage recompose(const Image& image, const BoxSet& boxes, RecomposeMode mode,
                       const RecomposeOptions& options = {});

/// Box order used by the tiling modes: by (y1, x1), then (y2, x2).
std::vector<std::size_t> scan_order(const BoxSet& boxes);

}  // namespace hide
