#include "hide/metrics.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "hide/error.hpp"

namespace hide {
namespace {

// First and one-past-last patch index whose footprint meets [lo, hi).
std::pair<int, int> patch_span(int lo, int hi, int extent, int cells) {
  int first = -1;
  int last = -1;
  for (int c = 0; c < cells; ++c) {
    const auto p1 = static_cast<std::int64_t>(c) * extent / cells;
    const auto p2 = (static_cast<std::int64_t>(c + 1) * extent + cells - 1) / cells;
    if (std::max<std::int64_t>(p1, lo) < std::min<std::int64_t>(p2, hi)) {
      if (first < 0) first = c;
      last = c + 1;
    }
  }
  return {first, last};
}

void require_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("IoU threshold must lie in (0, 1]");
  }
}

}  // namespace

Region make_region(const BoundingBox& rect, const Geometry& g) {
  validate(g);
  validate(BoxSet{g.image_width, g.image_height, {rect}});
  Region region{rect, {}};
  const auto [c0, c1] = patch_span(rect.x1, rect.x2, g.image_width, g.patch_cols);
  const auto [r0, r1] = patch_span(rect.y1, rect.y2, g.image_height, g.patch_rows);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) region.patches.push_back({r, c});
  }
  if (region.patches.empty()) throw ValidationError("region covers no patches");
  return region;
}

std::vector<double> region_attention(const AttentionMap& map, const Region& region) {
  if (region.patches.empty()) throw ValidationError("region is empty");
  std::vector<double> out;
  out.reserve(region.patches.size());
  for (const auto& p : region.patches) {
    if (p.row < 0 || p.row >= map.rows() || p.col < 0 || p.col >= map.cols()) {
      throw ValidationError("region patch outside the attention grid");
    }
    out.push_back(map(p.row, p.col));
  }
  return out;
}

double mean_group_score(std::span<const AttentionMap> maps, const Region& region) {
  if (maps.empty()) throw ValidationError("token group is empty");
  if (region.patches.empty()) throw ValidationError("region is empty");
  double total = 0.0;
  for (const auto& m : maps) {
    if (m.shape() != maps.front().shape()) throw ValidationError("group maps differ in shape");
    for (double v : region_attention(m, region)) total += v;
  }
  return total / (static_cast<double>(maps.size()) * static_cast<double>(region.patches.size()));
}

std::vector<LayerScores> layer_profile(std::span<const AttentionBundle> bundles,
                                       const Region& region, std::span<const TokenGroup> groups) {
  if (bundles.empty()) throw ValidationError("layer profile needs at least one bundle");
  if (groups.empty()) throw ValidationError("layer profile needs at least one token group");
  const Geometry& geometry = bundles.front().geometry;
  std::vector<LayerScores> out;
  for (const auto& bundle : bundles) {
    if (bundle.geometry != geometry) {
      throw ValidationError("bundle for layer " + std::to_string(bundle.layer) +
                            " has inconsistent geometry");
    }
    LayerScores scores{bundle.layer, {}};
    for (const auto& group : groups) {
      if (group.members.empty()) throw ValidationError("token group is empty");
      std::vector<AttentionMap> maps;
      for (const auto& token : group.members) {
        auto match = [&](const TokenMap& tm) { return tm.token == token; };
        auto it = std::find_if(bundle.key_maps.begin(), bundle.key_maps.end(), match);
        if (it == bundle.key_maps.end()) {
          it = std::find_if(bundle.noise_maps.begin(), bundle.noise_maps.end(), match);
          if (it == bundle.noise_maps.end()) {
            throw ValidationError("token '" + token.text + "'@" + std::to_string(token.position) +
                                  " missing from layer " + std::to_string(bundle.layer));
          }
        }
        maps.push_back(it->map);
      }
      scores.group_scores.push_back(mean_group_score(maps, region));
    }
    out.push_back(std::move(scores));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.layer < b.layer; });
  return out;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t iw = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const std::int64_t ih = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const std::int64_t inter = iw * ih;
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double recall_at_iou(const BoxSet& pred, const BoxSet& gt, double threshold) {
  require_threshold(threshold);
  if (gt.boxes.empty()) throw ValidationError("recall needs at least one ground-truth box");
  std::vector<bool> used(pred.boxes.size(), false);
  std::size_t matched = 0;
  for (const auto& g : gt.boxes) {
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t p = 0; p < pred.boxes.size(); ++p) {
      if (used[p]) continue;
      const double v = iou(pred.boxes[p], g);
      if (v >= threshold && v > best_iou) {
        best = static_cast<int>(p);
        best_iou = v;
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(best)] = true;
      ++matched;
    }
  }
  return static_cast<double>(matched) / static_cast<double>(gt.boxes.size());
}

double mean_best_iou(const BoxSet& pred, const BoxSet& gt) {
  if (gt.boxes.empty()) throw ValidationError("mean IoU needs at least one ground-truth box");
  double total = 0.0;
  for (const auto& g : gt.boxes) {
    double best = 0.0;
    for (const auto& p : pred.boxes) best = std::max(best, iou(p, g));
    total += best;
  }
  return total / static_cast<double>(gt.boxes.size());
}

SampleScore score_sample(std::string id, const BoxSet& pred, const BoxSet& gt, double threshold) {
  return {std::move(id), gt.boxes.size(), pred.boxes.size(), recall_at_iou(pred, gt, threshold),
          mean_best_iou(pred, gt)};
}

EvaluationReport summarize(std::vector<SampleScore> samples, double threshold) {
  require_threshold(threshold);
  EvaluationReport report{threshold, std::move(samples), 0.0, 0.0};
  if (report.samples.empty()) return report;
  for (const auto& s : report.samples) {
    report.mean_recall += s.recall;
    report.mean_iou += s.mean_iou;
  }
  report.mean_recall /= static_cast<double>(report.samples.size());
  report.mean_iou /= static_cast<double>(report.samples.size());
  return report;
}

std::string report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["iou_threshold"] = report.iou_threshold;
  j["num_samples"] = report.samples.size();
  j["mean_recall"] = report.mean_recall;
  j["mean_iou"] = report.mean_iou;
  j["samples"] = nlohmann::ordered_json::array();
  for (const auto& s : report.samples) {
    j["samples"].push_back(nlohmann::ordered_json{{"id", s.id},
                                                  {"gt_boxes", s.gt_boxes},
                                                  {"pred_boxes", s.pred_boxes},
                                                  {"recall", s.recall},
                                                  {"mean_iou", s.mean_iou}});
  }
  return j.dump(2) + "\n";
}

}  // namespace hide
