#include "hide/layout_compaction.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "hide/error.hpp"
#include "hide/lcg.hpp"

namespace hide {
namespace {

std::vector<int> grid_lines(const BoxSet& boxes, int extent, bool horizontal) {
  std::vector<int> lines{0, extent};
  for (const auto& b : boxes.boxes) {
    lines.push_back(horizontal ? b.x1 : b.y1);
    lines.push_back(horizontal ? b.x2 : b.y2);
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

int line_index(const std::vector<int>& lines, int value) {
  return static_cast<int>(std::lower_bound(lines.begin(), lines.end(), value) - lines.begin());
}

// Interval containing coordinate v, or -1 when outside [lines.front(), lines.back()).
int interval_of(const std::vector<int>& lines, int v) {
  if (v < lines.front() || v >= lines.back()) return -1;
  return static_cast<int>(std::upper_bound(lines.begin(), lines.end(), v) - lines.begin()) - 1;
}

void check_dims(const Image& image, const BoxSet& boxes) {
  if (image.width() != boxes.image_width || image.height() != boxes.image_height) {
    throw ValidationError("image is " + std::to_string(image.width()) + "x" +
                          std::to_string(image.height()) + " but boxes were computed for " +
                          std::to_string(boxes.image_width) + "x" +
                          std::to_string(boxes.image_height));
  }
}

void paste_content_cells(const Image& src, const GridDecomposition& grid, Image& dst, int off_x,
                         int off_y, bool keep_positions, std::vector<CellProvenance>& prov) {
  for (int i = 0; i < grid.columns(); ++i) {
    for (int j = 0; j < grid.rows(); ++j) {
      if (!grid.content(i, j)) continue;
      const int sx = grid.xs[i];
      const int sy = grid.ys[j];
      const int w = grid.xs[i + 1] - sx;
      const int h = grid.ys[j + 1] - sy;
      const int dx = (keep_positions ? sx : grid.x_map[i]) + off_x;
      const int dy = (keep_positions ? sy : grid.y_map[j]) + off_y;
      dst.paste(src, sx, sy, w, h, dx, dy);
      prov.push_back({sx, sy, sx + w, sy + h, dx, dy});
    }
  }
}

CompactImage tile(const Image& image, const BoxSet& boxes, std::vector<std::size_t> order,
                  Rgb fill) {
  int width = 0;
  int height = 0;
  for (auto k : order) {
    width += boxes.boxes[k].width();
    height = std::max(height, boxes.boxes[k].height());
  }
  CompactImage out{Image(width, height, fill), {}, false};
  int x = 0;
  for (auto k : order) {
    const auto& b = boxes.boxes[k];
    out.image.paste(image, b.x1, b.y1, b.width(), b.height(), x, 0);
    out.provenance.push_back({b.x1, b.y1, b.x2, b.y2, x, 0});
    x += b.width();
  }
  return out;
}

}  // namespace

GridDecomposition build_grid(const BoxSet& boxes, int width, int height) {
  BoxSet checked = boxes;
  checked.image_width = width;
  checked.image_height = height;
  validate(checked);

  GridDecomposition g;
  g.xs = grid_lines(boxes, width, true);
  g.ys = grid_lines(boxes, height, false);
  const int cols = g.columns();
  const int rows = g.rows();
  g.cell_content.assign(static_cast<std::size_t>(cols) * rows, false);

  // Every box edge is a grid line, so a cell meets a box iff it lies inside it.
  for (const auto& b : boxes.boxes) {
    const int i0 = line_index(g.xs, b.x1);
    const int i1 = line_index(g.xs, b.x2);
    const int j0 = line_index(g.ys, b.y1);
    const int j1 = line_index(g.ys, b.y2);
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) g.cell_content[static_cast<std::size_t>(j) * cols + i] = true;
    }
  }

  g.column_kept.assign(cols, false);
  g.row_kept.assign(rows, false);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      if (g.content(i, j)) {
        g.column_kept[i] = true;
        g.row_kept[j] = true;
      }
    }
  }

  g.x_map.assign(g.xs.size(), 0);
  for (int i = 0; i < cols; ++i) {
    g.x_map[i + 1] = g.x_map[i] + (g.column_kept[i] ? g.xs[i + 1] - g.xs[i] : 0);
  }
  g.y_map.assign(g.ys.size(), 0);
  for (int j = 0; j < rows; ++j) {
    g.y_map[j + 1] = g.y_map[j] + (g.row_kept[j] ? g.ys[j + 1] - g.ys[j] : 0);
  }
  g.new_width = g.x_map.back();
  g.new_height = g.y_map.back();
  return g;
}

bool is_content_cell(int i, int j, const BoxSet& boxes, const GridDecomposition& grid) {
  if (i < 0 || i >= grid.columns() || j < 0 || j >= grid.rows()) {
    throw DomainError("cell (" + std::to_string(i) + "," + std::to_string(j) +
                      ") outside the canonical grid");
  }
  const int cx1 = grid.xs[i];
  const int cx2 = grid.xs[i + 1];
  const int cy1 = grid.ys[j];
  const int cy2 = grid.ys[j + 1];
  return std::any_of(boxes.boxes.begin(), boxes.boxes.end(), [&](const BoundingBox& b) {
    return std::max(cx1, b.x1) < std::min(cx2, b.x2) && std::max(cy1, b.y1) < std::min(cy2, b.y2);
  });
}

std::pair<int, int> transform_point(int x, int y, const GridDecomposition& grid) {
  const int i = interval_of(grid.xs, x);
  const int j = interval_of(grid.ys, y);
  if (i < 0 || j < 0) {
    throw DomainError("point (" + std::to_string(x) + "," + std::to_string(y) +
                      ") lies outside the image");
  }
  if (!grid.column_kept[i] || !grid.row_kept[j]) {
    throw DomainError("point (" + std::to_string(x) + "," + std::to_string(y) +
                      ") lies in a dropped column or row");
  }
  return {x - grid.xs[i] + grid.x_map[i], y - grid.ys[j] + grid.y_map[j]};
}

BoundingBox transform_box(const BoundingBox& box, const GridDecomposition& grid) {
  const auto [x1, y1] = transform_point(box.x1, box.y1, grid);
  const auto [x2, y2] = transform_point(box.x2 - 1, box.y2 - 1, grid);
  return BoundingBox(x1, y1, x2 + 1, y2 + 1, box.tokens);
}

CompactImage compact_image(const Image& image, const BoxSet& boxes, Rgb fill) {
  check_dims(image, boxes);
  if (boxes.empty()) return {image, {}, true};
  const auto grid = build_grid(boxes, image.width(), image.height());
  CompactImage out{Image(grid.new_width, grid.new_height, fill), {}, false};
  paste_content_cells(image, grid, out.image, 0, 0, false, out.provenance);
  return out;
}

std::vector<std::size_t> scan_order(const BoxSet& boxes) {
  std::vector<std::size_t> order(boxes.boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& p = boxes.boxes[a];
    const auto& q = boxes.boxes[b];
    return std::tie(p.y1, p.x1, p.y2, p.x2) < std::tie(q.y1, q.x1, q.y2, q.x2);
  });
  return order;
}

CompactImage recompose(const Image& image, const BoxSet& boxes, RecomposeMode mode,
                       const RecomposeOptions& options) {
  check_dims(image, boxes);
  if (boxes.empty()) return {image, {}, true};
  validate(boxes);

  switch (mode) {
    case RecomposeMode::kSequenceTiling:
      return tile(image, boxes, scan_order(boxes), options.fill);
    case RecomposeMode::kRandomTiling: {
      auto order = scan_order(boxes);
      Lcg64 rng(options.seed);
      for (std::size_t k = order.size(); k > 1; --k) {
        std::swap(order[k - 1], order[rng.uniform_index(k)]);
      }
      return tile(image, boxes, std::move(order), options.fill);
    }
    case RecomposeMode::kMasking: {
      const auto grid = build_grid(boxes, image.width(), image.height());
      CompactImage out{Image(image.width(), image.height(), options.fill), {}, false};
      paste_content_cells(image, grid, out.image, 0, 0, true, out.provenance);
      return out;
    }
    case RecomposeMode::kLayoutNoCompaction: {
      const auto grid = build_grid(boxes, image.width(), image.height());
      CompactImage out{Image(image.width(), image.height(), options.fill), {}, false};
      paste_content_cells(image, grid, out.image, 0, 0, false, out.provenance);
      return out;
    }
    case RecomposeMode::kLayoutCompact:
      return compact_image(image, boxes, options.fill);
  }
  throw ParameterError("unknown recomposition mode");
}

}  // namespace hide
