#include "hide/region_extraction.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hide/synthetic_bench.hpp"
#include "oracles.hpp"

namespace hide {
namespace {

ThresholdConfig thresh(double alpha, Connectivity conn = Connectivity::kEight) {
  ThresholdConfig cfg;
  cfg.alpha = alpha;
  cfg.connectivity = conn;
  return cfg;
}

oracle::Partition as_partition(const std::vector<ConnectedComponent>& comps) {
  oracle::Partition p;
  for (const auto& c : comps) {
    std::vector<std::pair<int, int>> cells;
    for (const auto& m : c.members) cells.emplace_back(m.row, m.col);
    std::sort(cells.begin(), cells.end());
    p.insert(cells);
  }
  return p;
}

ConnectedComponent single(int row, int col) { return {{{row, col}}}; }

TEST(Binarize, StrictThreshold) {
  const AttentionMap m(2, 2, {0.0F, 1.0F, 0.5F, 0.25F});
  EXPECT_EQ(binarize(m, thresh(0.4)), BinaryMask(2, 2, {0, 1, 1, 0}));
}

TEST(Binarize, AlphaOneSelectsNothing) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(binarize(oracle::random_map(6, 6, rng), thresh(1.0)), BinaryMask(6, 6, 0));
}

TEST(Binarize, AlphaZeroSelectsAboveMinimum) {
  const AttentionMap m(2, 3, {-2.0F, 0.0F, -2.0F, 5.0F, 1.0F, -2.0F});
  EXPECT_EQ(binarize(m, thresh(0.0)), BinaryMask(2, 3, {0, 1, 0, 1, 1, 0}));
}

TEST(Binarize, ConstantMapGivesEmptyMask) {
  EXPECT_EQ(binarize(AttentionMap(3, 3, 0.5F), thresh(0.0)), BinaryMask(3, 3, 0));
}

TEST(Binarize, RejectsBadAlpha) {
  EXPECT_THROW(binarize(AttentionMap(2, 2), thresh(1.5)), ParameterError);
  EXPECT_THROW(binarize(AttentionMap(2, 2), thresh(-0.1)), ParameterError);
}

TEST(Binarize, MaskedAreaNonIncreasingInAlpha) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_map(12, 12, rng, -1.0F, 1.0F);
    long prev = 145;
    for (double a = 0.0; a <= 1.0; a += 0.05) {
      const auto mask = binarize(m, thresh(a));
      const long area = std::count(mask.values().begin(), mask.values().end(), 1);
      EXPECT_LE(area, prev);
      prev = area;
    }
  }
}

TEST(Components, EmptyMask) {
  EXPECT_TRUE(components(BinaryMask(4, 4, 0), thresh(0.5)).empty());
}

TEST(Components, DiagonalDependsOnConnectivity) {
  const BinaryMask mask(2, 2, {1, 0, 0, 1});
  EXPECT_EQ(components(mask, thresh(0.5, Connectivity::kFour)).size(), 2U);
  EXPECT_EQ(components(mask, thresh(0.5, Connectivity::kEight)).size(), 1U);
}

TEST(Components, MinAreaDropsSmallComponents) {
  const BinaryMask mask(3, 4, {1, 0, 1, 1,  //
                               0, 0, 1, 1,  //
                               1, 0, 0, 0});
  auto cfg = thresh(0.5, Connectivity::kFour);
  EXPECT_EQ(components(mask, cfg).size(), 3U);
  cfg.min_area = 2;
  const auto kept = components(mask, cfg);
  ASSERT_EQ(kept.size(), 1U);
  EXPECT_EQ(kept[0].members.size(), 4U);
}

TEST(Components, DeterministicOrder) {
  const BinaryMask mask(3, 5, {0, 0, 0, 1, 0,  //
                               1, 0, 0, 1, 0,  //
                               1, 0, 1, 0, 0});
  const auto comps = components(mask, thresh(0.5, Connectivity::kFour));
  ASSERT_EQ(comps.size(), 3U);
  EXPECT_EQ(comps[0].members.front(), (PatchCoord{0, 3}));
  EXPECT_EQ(comps[1].members.front(), (PatchCoord{1, 0}));
  EXPECT_EQ(comps[2].members.front(), (PatchCoord{2, 2}));
}

TEST(Components, MatchesFloodFillOracle) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const int rows = 1 + static_cast<int>(rng() % 20);
    const int cols = 1 + static_cast<int>(rng() % 20);
    const double density = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    BinaryMask mask(rows, cols);
    for (auto& v : mask.values()) v = std::bernoulli_distribution(density)(rng) ? 1 : 0;
    for (auto conn : {Connectivity::kFour, Connectivity::kEight}) {
      const auto comps = components(mask, thresh(0.5, conn));
      EXPECT_EQ(as_partition(comps), oracle::flood_fill_partition(mask, conn == Connectivity::kEight));
    }
  }
}

TEST(ComponentToBox, IntegerScale) {
  const Geometry g{224, 224, 8, 8};
  const auto b = component_to_box(single(3, 2), g);
  EXPECT_EQ(b, BoundingBox(56, 84, 84, 112));
}

TEST(ComponentToBox, FullGridIsFullImage) {
  const Geometry g{105, 70, 10, 7};
  ConnectedComponent c{{{0, 0}, {9, 6}}};
  EXPECT_EQ(component_to_box(c, g), BoundingBox(0, 0, 105, 70));
}

TEST(ComponentToBox, NonIntegerScaleUsesFloorCeil) {
  const Geometry g{105, 105, 10, 10};
  EXPECT_EQ(component_to_box(single(0, 0), g), BoundingBox(0, 0, 11, 11));
  // Patch 1 spans [10.5, 21) -> [10, 21).
  EXPECT_EQ(component_to_box(single(1, 1), g), BoundingBox(10, 10, 21, 21));
}

TEST(ComponentToBox, TightInPatchSpace) {
  std::mt19937_64 rng(17);
  const Geometry g{97, 61, 13, 9};
  for (int t = 0; t < 100; ++t) {
    BinaryMask mask(13, 9);
    for (auto& v : mask.values()) v = std::bernoulli_distribution(0.3)(rng) ? 1 : 0;
    for (const auto& c : components(mask, thresh(0.5))) {
      const auto b = component_to_box(c, g);
      EXPECT_TRUE(0 <= b.x1 && b.x1 < b.x2 && b.x2 <= 97 && 0 <= b.y1 && b.y1 < b.y2 && b.y2 <= 61);
      int rmin = 99, rmax = -1, cmin = 99, cmax = -1;
      for (const auto& m : c.members) {
        rmin = std::min(rmin, m.row);
        rmax = std::max(rmax, m.row);
        cmin = std::min(cmin, m.col);
        cmax = std::max(cmax, m.col);
      }
      EXPECT_EQ(c.min_row(), rmin);
      EXPECT_EQ(c.max_row(), rmax);
      EXPECT_EQ(c.min_col(), cmin);
      EXPECT_EQ(c.max_col(), cmax);
    }
  }
}

TEST(ExtractBoxes, KeyEqualToNoiseGivesNothing) {
  AttentionBundle b;
  b.geometry = {80, 80, 8, 8};
  std::mt19937_64 rng(3);
  auto m = oracle::random_map(8, 8, rng);
  for (auto& v : m.values()) v /= 64.0F;
  b.key_maps.push_back({{"cat", 0}, m});
  b.noise_maps.push_back({{"the", 1}, m});
  EXPECT_TRUE(extract_boxes(b, {}).empty());
}

TEST(ExtractBoxes, OneTokenOneBlobNoNoise) {
  SynthSpec spec;
  spec.n_tokens = 1;
  spec.n_noise_tokens = 0;
  const auto s = generate_sample(spec, 3);
  const auto boxes = extract_boxes(s.bundle, {});
  ASSERT_EQ(boxes.boxes.size(), 1U);
  EXPECT_EQ(boxes.boxes[0].tokens, std::vector<std::string>{"object0"});
}

TEST(ExtractBoxes, TwoBlobsTwoTokens) {
  SynthSpec spec;
  spec.n_tokens = 2;
  spec.sink_amplitude = 2.0;
  spec.noise_std = 0.05;
  for (int i = 0; i < 10; ++i) {
    const auto s = generate_sample(spec, i);
    const auto boxes = extract_boxes(s.bundle, {});
    ASSERT_EQ(boxes.boxes.size(), 2U) << i;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& gt = s.gt.boxes[k];
      const auto& b = boxes.boxes[k];
      const double inter = std::max(0, std::min(b.x2, gt.x2) - std::max(b.x1, gt.x1)) *
                           static_cast<double>(std::max(0, std::min(b.y2, gt.y2) - std::max(b.y1, gt.y1)));
      EXPECT_GE(inter / static_cast<double>(b.area() + gt.area() - inter), 0.5);
      EXPECT_EQ(b.tokens, gt.tokens);
    }
  }
}

TEST(ExtractBoxes, NoiseFreeWithoutSmoothingRecoversGroundTruthExactly) {
  SynthSpec spec;
  spec.n_tokens = 3;
  spec.image_width = 400;  // non-integer patch stride
  spec.image_height = 300;
  ExtractionOptions opts;
  opts.smoothing.sigma = 1e-3;
  for (double alpha : {0.01, 0.3, 0.7, 0.99}) {
    opts.threshold.alpha = alpha;
    for (int i = 0; i < 5; ++i) {
      const auto s = generate_sample(spec, i);
      EXPECT_EQ(extract_boxes(s.bundle, opts), s.gt) << "alpha " << alpha << " sample " << i;
    }
  }
}

TEST(ExtractBoxes, IdenticalRectanglesMerge) {
  AttentionBundle b;
  b.geometry = {40, 40, 4, 4};
  AttentionMap m(4, 4, 0.0F);
  m(1, 1) = m(1, 2) = 0.25F;
  b.key_maps.push_back({{"red", 0}, m});
  b.key_maps.push_back({{"car", 1}, m});
  b.key_maps.push_back({{"red", 5}, m});
  ExtractionOptions opts;
  opts.smoothing.sigma = 1e-3;
  const auto boxes = extract_boxes(b, opts);
  ASSERT_EQ(boxes.boxes.size(), 1U);
  EXPECT_EQ(boxes.boxes[0], BoundingBox(10, 10, 30, 20, {"red", "car"}));
}

TEST(ExtractBoxes, PurifiedBundleIsThresholdedDirectly) {
  AttentionBundle b;
  b.geometry = {40, 40, 4, 4};
  b.purified = true;
  AttentionMap m(4, 4, -0.5F);
  m(3, 3) = 0.9F;
  b.key_maps.push_back({{"cup", 0}, m});
  const auto boxes = extract_boxes(b, {});
  ASSERT_EQ(boxes.boxes.size(), 1U);
  EXPECT_EQ(boxes.boxes[0], BoundingBox(30, 30, 40, 40, {"cup"}));
}

}  // namespace
}  // namespace hide
