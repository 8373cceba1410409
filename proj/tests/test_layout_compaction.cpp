#include "hide/layout_compaction.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace hide {
namespace {

BoxSet box_set(int w, int h, std::vector<BoundingBox> boxes) { return {w, h, std::move(boxes)}; }

Image raster(int w, int h) {
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), 7});
  }
  return img;
}

Image crop(const Image& img, const BoundingBox& b) {
  Image out(b.width(), b.height());
  out.paste(img, b.x1, b.y1, b.width(), b.height(), 0, 0);
  return out;
}

BoxSet random_boxes(int w, int h, int max_boxes, std::mt19937_64& rng) {
  BoxSet s{w, h, {}};
  const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_boxes));
  for (int k = 0; k < n; ++k) s.boxes.push_back(oracle::random_box(w, h, rng));
  return s;
}

TEST(BuildGrid, SingleBoxHandTrace) {
  const auto g = build_grid(box_set(10, 10, {{2, 3, 5, 7}}), 10, 10);
  EXPECT_EQ(g.xs, (std::vector<int>{0, 2, 5, 10}));
  EXPECT_EQ(g.ys, (std::vector<int>{0, 3, 7, 10}));
  EXPECT_EQ(g.column_kept, (std::vector<bool>{false, true, false}));
  EXPECT_EQ(g.row_kept, (std::vector<bool>{false, true, false}));
  EXPECT_EQ(g.x_map, (std::vector<int>{0, 0, 3, 3}));
  EXPECT_EQ(g.y_map, (std::vector<int>{0, 0, 4, 4}));
  EXPECT_EQ(g.new_width, 3);
  EXPECT_EQ(g.new_height, 4);
}

TEST(BuildGrid, EmptySetDropsEverything) {
  const auto g = build_grid(box_set(10, 8, {}), 10, 8);
  EXPECT_EQ(g.xs, (std::vector<int>{0, 10}));
  EXPECT_EQ(g.new_width, 0);
  EXPECT_EQ(g.new_height, 0);
}

TEST(BuildGrid, FullImageBoxIsIdentity) {
  const auto g = build_grid(box_set(10, 8, {{0, 0, 10, 8}}), 10, 8);
  EXPECT_EQ(g.new_width, 10);
  EXPECT_EQ(g.new_height, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 10; ++x) EXPECT_EQ(transform_point(x, y, g), std::make_pair(x, y));
  }
}

TEST(BuildGrid, RejectsBoxOutsideImage) {
  EXPECT_THROW(build_grid(box_set(10, 10, {{2, 3, 11, 7}}), 10, 10), ValidationError);
  EXPECT_THROW(build_grid(box_set(10, 10, {{5, 3, 5, 7}}), 10, 10), ValidationError);
}

TEST(IsContentCell, Cases) {
  const auto boxes = box_set(10, 10, {{2, 3, 5, 7}});
  const auto g = build_grid(boxes, 10, 10);
  EXPECT_TRUE(is_content_cell(1, 1, boxes, g));
  EXPECT_FALSE(is_content_cell(0, 1, boxes, g));  // shares the edge x = 2 only
  EXPECT_FALSE(is_content_cell(1, 2, boxes, g));
  EXPECT_FALSE(is_content_cell(2, 2, boxes, g));
  EXPECT_THROW(is_content_cell(3, 0, boxes, g), DomainError);
  EXPECT_THROW(is_content_cell(0, -1, boxes, g), DomainError);
}

TEST(IsContentCell, AgreesWithGridFlags) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto boxes = random_boxes(24, 20, 4, rng);
    const auto g = build_grid(boxes, 24, 20);
    for (int j = 0; j < g.rows(); ++j) {
      for (int i = 0; i < g.columns(); ++i) EXPECT_EQ(g.content(i, j), is_content_cell(i, j, boxes, g));
    }
  }
}

TEST(TransformPoint, SingleBox) {
  const auto g = build_grid(box_set(10, 10, {{2, 3, 5, 7}}), 10, 10);
  EXPECT_EQ(transform_point(3, 5, g), std::make_pair(1, 2));
  EXPECT_EQ(transform_point(2, 3, g), std::make_pair(0, 0));
  EXPECT_EQ(transform_point(4, 6, g), std::make_pair(2, 3));
  EXPECT_THROW(transform_point(1, 5, g), DomainError);
  EXPECT_THROW(transform_point(5, 5, g), DomainError);
  EXPECT_THROW(transform_point(10, 5, g), DomainError);
}

TEST(TransformPoint, TwoBoxes) {
  // xs = 0 2 5 6 9 10, ys = 0 3 6 7 9 10; kept columns [2,5) and [6,9).
  const auto g = build_grid(box_set(10, 10, {{2, 3, 5, 7}, {6, 6, 9, 9}}), 10, 10);
  EXPECT_EQ(g.new_width, 6);
  EXPECT_EQ(g.new_height, 6);
  EXPECT_EQ(transform_point(7, 7, g), std::make_pair(4, 4));
  EXPECT_EQ(transform_point(6, 6, g), std::make_pair(3, 3));
  EXPECT_EQ(transform_point(8, 3, g), std::make_pair(5, 0));
  EXPECT_THROW(transform_point(5, 7, g), DomainError);
}

TEST(CompactImage, SingleBoxIsCrop) {
  const auto img = raster(10, 10);
  const BoundingBox b(2, 3, 5, 7);
  const auto out = compact_image(img, box_set(10, 10, {b}));
  EXPECT_FALSE(out.degenerate);
  EXPECT_EQ(out.image, crop(img, b));
}

TEST(CompactImage, DiagonalBoxesLeaveFilledCorners) {
  const auto img = raster(6, 6);
  const Rgb fill{1, 2, 3};
  const auto out = compact_image(img, box_set(6, 6, {{0, 0, 2, 2}, {4, 4, 6, 6}}), fill);
  ASSERT_EQ(out.image.width(), 4);
  ASSERT_EQ(out.image.height(), 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const bool top = y < 2;
      const bool left = x < 2;
      Rgb expect = fill;
      if (top && left) expect = img.at(x, y);
      if (!top && !left) expect = img.at(x + 2, y + 2);
      EXPECT_EQ(out.image.at(x, y), expect) << x << "," << y;
    }
  }
  ASSERT_EQ(out.provenance.size(), 2U);
  EXPECT_EQ(out.provenance[0], (CellProvenance{0, 0, 2, 2, 0, 0}));
  EXPECT_EQ(out.provenance[1], (CellProvenance{4, 4, 6, 6, 2, 2}));
}

TEST(CompactImage, WholeImageIsIdentity) {
  const auto img = raster(7, 5);
  EXPECT_EQ(compact_image(img, box_set(7, 5, {{0, 0, 7, 5}})).image, img);
}

TEST(CompactImage, EmptySetIsDegenerateOriginal) {
  const auto img = raster(7, 5);
  const auto out = compact_image(img, box_set(7, 5, {}));
  EXPECT_TRUE(out.degenerate);
  EXPECT_EQ(out.image, img);
}

TEST(CompactImage, DimensionMismatch) {
  EXPECT_THROW(compact_image(raster(7, 5), box_set(8, 5, {{0, 0, 2, 2}})), ValidationError);
}

TEST(Recompose, Modes) {
  const auto img = raster(10, 10);
  const auto boxes = box_set(10, 10, {{6, 6, 8, 10}, {0, 0, 2, 1}});
  const Rgb fill{9, 9, 9};
  const RecomposeOptions opts{fill, 3};

  const auto seq = recompose(img, boxes, RecomposeMode::kSequenceTiling, opts);
  ASSERT_EQ(seq.image.width(), 4);
  ASSERT_EQ(seq.image.height(), 4);
  EXPECT_EQ(seq.image.at(0, 0), img.at(0, 0));  // top-left box first in scan order
  EXPECT_EQ(seq.image.at(0, 1), fill);
  EXPECT_EQ(seq.image.at(2, 3), img.at(6, 9));

  const auto mask = recompose(img, boxes, RecomposeMode::kMasking, opts);
  ASSERT_EQ(mask.image.width(), 10);
  ASSERT_EQ(mask.image.height(), 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      const bool inside = boxes.boxes[0].contains(x, y) || boxes.boxes[1].contains(x, y);
      EXPECT_EQ(mask.image.at(x, y), inside ? img.at(x, y) : fill);
    }
  }

  const auto compact = recompose(img, boxes, RecomposeMode::kLayoutCompact, opts);
  EXPECT_EQ(compact.image, compact_image(img, boxes, fill).image);

  const auto padded = recompose(img, boxes, RecomposeMode::kLayoutNoCompaction, opts);
  ASSERT_EQ(padded.image.width(), 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      const bool in_layout = x < compact.image.width() && y < compact.image.height();
      EXPECT_EQ(padded.image.at(x, y), in_layout ? compact.image.at(x, y) : fill);
    }
  }

  const auto rnd_a = recompose(img, boxes, RecomposeMode::kRandomTiling, opts);
  const auto rnd_b = recompose(img, boxes, RecomposeMode::kRandomTiling, opts);
  EXPECT_EQ(rnd_a.image, rnd_b.image);
  EXPECT_EQ(rnd_a.image.width(), 4);
}

TEST(Recompose, RandomTilingIsAPermutationOfCrops) {
  std::mt19937_64 rng(8);
  const auto img = oracle::random_image(20, 20, rng);
  const auto boxes = random_boxes(20, 20, 5, rng);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto out = recompose(img, boxes, RecomposeMode::kRandomTiling, {kDefaultFill, seed});
    ASSERT_EQ(out.provenance.size(), boxes.boxes.size());
    std::vector<std::tuple<int, int, int, int>> got;
    std::vector<std::tuple<int, int, int, int>> want;
    for (const auto& p : out.provenance) {
      got.emplace_back(p.src_x1, p.src_y1, p.src_x2, p.src_y2);
      EXPECT_EQ(crop(out.image, {p.dst_x, p.dst_y, p.dst_x + p.src_x2 - p.src_x1, p.dst_y + p.src_y2 - p.src_y1}),
                crop(img, {p.src_x1, p.src_y1, p.src_x2, p.src_y2}));
    }
    for (const auto& b : boxes.boxes) want.emplace_back(b.x1, b.y1, b.x2, b.y2);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
  }
}

TEST(CompactionProperties, RandomBoxSets) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const int w = 1 + static_cast<int>(rng() % 32);
    const int h = 1 + static_cast<int>(rng() % 32);
    const auto img = oracle::random_image(w, h, rng);
    const auto boxes = random_boxes(w, h, 4, rng);
    const auto grid = build_grid(boxes, w, h);
    const auto out = compact_image(img, boxes);

    // Oracle equivalence and compactness.
    EXPECT_EQ(out.image, oracle::keep_and_stitch(img, boxes, kDefaultFill));
    EXPECT_EQ(out.image.width(), oracle::kept_rank(boxes, w, true));
    EXPECT_EQ(out.image.height(), oracle::kept_rank(boxes, h, false));

    BoxSet moved{out.image.width(), out.image.height(), {}};
    for (const auto& b : boxes.boxes) {
      const auto tb = transform_box(b, grid);
      // Fidelity: each box arrives intact.
      EXPECT_EQ(tb.width(), b.width());
      EXPECT_EQ(tb.height(), b.height());
      EXPECT_EQ(crop(out.image, tb), crop(img, b));
      moved.boxes.push_back(tb);
    }
    // Order: strict separations survive.
    for (std::size_t a = 0; a < boxes.boxes.size(); ++a) {
      for (std::size_t b = 0; b < boxes.boxes.size(); ++b) {
        const auto& p = boxes.boxes[a];
        const auto& q = boxes.boxes[b];
        if (p.x2 <= q.x1) EXPECT_LE(moved.boxes[a].x2, moved.boxes[b].x1);
        if (p.y2 <= q.y1) EXPECT_LE(moved.boxes[a].y2, moved.boxes[b].y1);
        if (p.x1 < q.x1) EXPECT_LT(moved.boxes[a].x1, moved.boxes[b].x1);
        if (p.y1 < q.y1) EXPECT_LT(moved.boxes[a].y1, moved.boxes[b].y1);
      }
    }
    // Idempotence.
    EXPECT_EQ(compact_image(out.image, moved).image, out.image);

    // Area accounting: copied cells plus fill cells cover the output exactly.
    std::int64_t copied = 0;
    for (const auto& p : out.provenance) {
      copied += static_cast<std::int64_t>(p.src_x2 - p.src_x1) * (p.src_y2 - p.src_y1);
    }
    std::int64_t inside = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        inside += std::any_of(boxes.boxes.begin(), boxes.boxes.end(),
                              [&](const BoundingBox& b) { return b.contains(x, y); });
      }
    }
    EXPECT_EQ(copied, inside);
    EXPECT_LE(copied, static_cast<std::int64_t>(out.image.width()) * out.image.height());
  }
}

TEST(ScanOrder, SortsByOrigin) {
  const auto boxes = box_set(10, 10, {{5, 5, 6, 6}, {1, 5, 2, 6}, {9, 0, 10, 1}, {1, 5, 2, 7}});
  EXPECT_EQ(scan_order(boxes), (std::vector<std::size_t>{2, 1, 3, 0}));
}

}  // namespace
}  // namespace hide
