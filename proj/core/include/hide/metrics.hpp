#pragma once

#include <span>
#include <string>
#include <vector>

#include "hide/region_extraction.hpp"
#include "hide/types.hpp"

namespace hide {

/// Ground-truth pixel rectangle and the patches whose pixel footprint
/// [floor(c*W/cols), ceil((c+1)*W/cols)) meets it.
struct Region {
  BoundingBox rect;
  std::vector<PatchCoord> patches;  // row-major
};

/// Throws ValidationError if the rectangle is empty or outside the image.
Region make_region(const BoundingBox& rect, const Geometry& geometry);

enum class TokenGroupLabel { kSemantic, kNonSemantic };

struct TokenGroup {
  TokenGroupLabel label = TokenGroupLabel::kSemantic;
  std::vector<TokenRef> members;
};

/// Attention values at the region's patches, row-major.
std::vector<double> region_attention(const AttentionMap& map, const Region& region);

/// Mean attention of a token group over a region:
/// (1 / (|T| |R|)) * sum over tokens and region patches.
double mean_group_score(std::span<const AttentionMap> maps, const Region& region);

struct LayerScores {
  int layer = 0;
  std::vector<double> group_scores;  // one per input group
};

/// mean_group_score per layer and group, sorted by layer. Group members are
/// looked up among both key and noise tokens of each bundle.
std::vector<LayerScores> layer_profile(std::span<const AttentionBundle> bundles,
                                       const Region& region, std::span<const TokenGroup> groups);

double iou(const BoundingBox& a, const BoundingBox& b);

/// Fraction of ground-truth boxes matched by a distinct prediction with
/// IoU >= threshold. Ground truth is visited in order; each takes the
/// best-IoU unused prediction (lowest index on ties).
double recall_at_iou(const BoxSet& pred, const BoxSet& gt, double threshold);

/// Mean over ground-truth boxes of the best IoU against any prediction.
double mean_best_iou(const BoxSet& pred, const BoxSet& gt);

struct SampleScore {
  std::string id;
  std::size_t gt_boxes = 0;
  std::size_t pred_boxes = 0;
  double recall = 0.0;
  double mean_iou = 0.0;
};

struct EvaluationReport {
  double iou_threshold = 0.5;
  std::vector<SampleScore> samples;
  double mean_recall = 0.0;
  double mean_iou = 0.0;
};

SampleScore score_sample(std::string id, const BoxSet& pred, const BoxSet& gt, double threshold);
EvaluationReport summarize(std::vector<SampleScore> samples, double threshold);
std::string report_to_json(const EvaluationReport& report);

}  // namespace hide
