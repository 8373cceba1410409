#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "hide/attention_ops.hpp"
#include "hide/bundle_io.hpp"
#include "hide/error.hpp"
#include "hide/image.hpp"
#include "hide/layout_compaction.hpp"
#include "hide/metrics.hpp"
#include "hide/overlay.hpp"
#include "hide/presets.hpp"
#include "hide/region_extraction.hpp"
#include "hide/synthetic_bench.hpp"

namespace hide::cli {
namespace {

namespace fs = std::filesystem;

struct Logger {
  std::ostream& err;
  std::mutex mu;

  void line(const std::string& tag, const std::string& msg) {
    std::lock_guard lock(mu);
    err << "[" << tag << "] " << msg << "\n";
  }
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) != nullptr) return kExitIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) return kExitIo;
  if (dynamic_cast<const Error*>(&e) != nullptr) return kExitUsage;
  return kExitIo;
}

// Runs `job` for every index on up to thread_budget() workers and returns the
// worst exit code. Failures are logged with the job's tag.
int run_batch(std::size_t n, const std::function<std::string(std::size_t)>& tag,
              const std::function<void(std::size_t)>& job, Logger& log) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kExitOk};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (const std::exception& e) {
        log.line(tag(i), std::string("error: ") + e.what());
        int code = exit_code_for(e);
        int prev = worst.load();
        while (code > prev && !worst.compare_exchange_weak(prev, code)) {
        }
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(thread_budget(), n));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return worst.load();
}

std::vector<fs::path> sample_dirs(const fs::path& root, const std::string& required) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory() && fs::exists(entry.path() / required)) out.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError("no sample directories with " + required + " under " + root.string());
  return out;
}

Rgb parse_fill(const std::string& text) {
  std::istringstream in(text);
  int c[3] = {0, 0, 0};
  char sep = 0;
  if (!(in >> c[0] >> sep) || sep != ',' || !(in >> c[1] >> sep) || sep != ',' || !(in >> c[2]) ||
      !in.eof()) {
    throw ParameterError("--fill expects r,g,b");
  }
  for (int v : c) {
    if (v < 0 || v > 255) throw ParameterError("--fill components must lie in [0, 255]");
  }
  return {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]),
          static_cast<std::uint8_t>(c[2])};
}

RecomposeMode parse_mode(const std::string& mode) {
  if (mode == "sequence") return RecomposeMode::kSequenceTiling;
  if (mode == "random") return RecomposeMode::kRandomTiling;
  if (mode == "mask") return RecomposeMode::kMasking;
  if (mode == "layout") return RecomposeMode::kLayoutNoCompaction;
  if (mode == "compact") return RecomposeMode::kLayoutCompact;
  throw ParameterError("unknown --mode '" + mode + "'");
}

std::string provenance_path_for(const fs::path& image_out) {
  auto p = image_out;
  p.replace_extension(".provenance.json");
  return p.string();
}

// Flags shared by the commands that localize regions.
struct ExtractFlags {
  std::string preset = "qwen";
  std::optional<double> sigma;
  std::optional<double> alpha;
  int connectivity = 8;
  int min_area = 1;
  bool no_purify = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--preset", preset, "Model-family defaults for sigma and alpha")
        ->check(CLI::IsMember({"qwen", "internvl"}))
        ->capture_default_str();
    cmd.add_option("--sigma", sigma, "Gaussian sigma in patches (overrides preset)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--alpha", alpha, "Binarization threshold in [0,1] (overrides preset)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--connectivity", connectivity, "Neighbour rule")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    cmd.add_option("--min-area", min_area, "Drop components smaller than this many patches")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--no-purify", no_purify, "Skip noise-prior subtraction");
  }

  [[nodiscard]] ExtractionOptions options() const {
    const auto p = find_preset(preset).value_or(kQwenPreset);
    ExtractionOptions o;
    o.smoothing.sigma = sigma.value_or(p.sigma);
    o.threshold.alpha = alpha.value_or(p.alpha);
    o.threshold.connectivity = connectivity == 4 ? Connectivity::kFour : Connectivity::kEight;
    o.threshold.min_area = min_area;
    o.subtract_noise_prior = !no_purify;
    gaussian_kernel(o.smoothing);
    validate(o.threshold);
    return o;
  }
};

struct PurifyFlags {
  std::string bundle;
  std::string out;
  double sigma = kQwenPreset.sigma;
};

struct RegionsFlags {
  std::string bundle;
  std::string out = "boxes.json";
  ExtractFlags extract;
};

struct CompactFlags {
  std::string image;
  std::string boxes;
  std::string out;
  std::string provenance;
  std::string fill = "128,128,128";
  std::string mode = "compact";
  std::uint64_t seed = 0;
};

struct PipelineFlags {
  std::string image;
  std::string bundle;
  std::string out_dir;
  std::string fill = "128,128,128";
  std::string mode = "compact";
  std::uint64_t seed = 0;
  ExtractFlags extract;
};

struct SynthFlags {
  SynthSpec spec;
  std::string sink_corner = "top-left";
  std::string out_dir;
};

struct EvalFlags {
  std::string pred;
  std::string gt;
  double iou = 0.5;
  std::string out;
  std::string pred_name = "boxes.json";
  std::string gt_name = "gt.json";
};

int cmd_purify(const PurifyFlags& f, Logger& log) {
  const auto bundle = read_bundle(f.bundle);
  const auto purified = purify_bundle(bundle, SmoothingConfig{f.sigma});
  write_bundle(purified, f.out);
  log.line(fs::path(f.bundle).stem().string(),
           "purified " + std::to_string(purified.key_maps.size()) + " key maps against " +
               std::to_string(bundle.noise_maps.size()) + " noise maps");
  return kExitOk;
}

int cmd_regions(const RegionsFlags& f, Logger& log) {
  const auto options = f.extract.options();
  auto one = [&](const fs::path& bundle_path, const fs::path& out, const std::string& tag) {
    const auto boxes = extract_boxes(read_bundle(bundle_path), options);
    write_boxes(boxes, out);
    log.line(tag, std::to_string(boxes.boxes.size()) + " boxes -> " + out.string());
  };
  if (!fs::is_directory(f.bundle)) {
    one(f.bundle, f.out, fs::path(f.bundle).stem().string());
    return kExitOk;
  }
  const auto dirs = sample_dirs(f.bundle, "bundle.hab");
  const auto name = fs::path(f.out).filename();
  return run_batch(
      dirs.size(), [&](std::size_t i) { return dirs[i].filename().string(); },
      [&](std::size_t i) { one(dirs[i] / "bundle.hab", dirs[i] / name, dirs[i].filename().string()); },
      log);
}

int cmd_compact(const CompactFlags& f, Logger& log) {
  const Rgb fill = parse_fill(f.fill);
  const auto mode = parse_mode(f.mode);
  const auto image = read_png(f.image);
  const auto boxes = read_boxes(f.boxes);
  const auto result = recompose(image, boxes, mode, {fill, f.seed});
  const std::string tag = fs::path(f.image).stem().string();
  if (result.degenerate) log.line(tag, "warning: no boxes; passing the original image through");
  write_png(result.image, f.out);
  write_provenance(result.provenance, f.provenance.empty() ? provenance_path_for(f.out) : f.provenance);
  log.line(tag, "recomposed " + std::to_string(boxes.boxes.size()) + " boxes into " +
                    std::to_string(result.image.width()) + "x" +
                    std::to_string(result.image.height()));
  return kExitOk;
}

void pipeline_one(const fs::path& image_path, const fs::path& bundle_path, const fs::path& out_dir,
                  const ExtractionOptions& options, RecomposeMode mode, const RecomposeOptions& rec,
                  const std::string& tag, Logger& log) {
  const auto bundle = read_bundle(bundle_path);
  const auto image = read_png(image_path);
  if (image.width() != bundle.geometry.image_width || image.height() != bundle.geometry.image_height) {
    throw ValidationError("image " + image_path.string() + " does not match bundle geometry");
  }
  const auto maps = localization_maps(bundle, options);
  const auto boxes = extract_boxes(bundle, options);
  const auto result = recompose(image, boxes, mode, rec);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_boxes(boxes, out_dir / "boxes.json");
  write_png(result.image, out_dir / "compact.png");
  write_provenance(result.provenance, out_dir / "compact.provenance.json");
  write_png(render_overlay(image, aggregate_overlay(maps)), out_dir / "overlay.png");
  if (result.degenerate) log.line(tag, "warning: no boxes; compact image is the original image");
  log.line(tag, std::to_string(boxes.boxes.size()) + " boxes, compact " +
                    std::to_string(result.image.width()) + "x" +
                    std::to_string(result.image.height()));
}

int cmd_pipeline(const PipelineFlags& f, Logger& log) {
  const auto options = f.extract.options();
  const auto mode = parse_mode(f.mode);
  const RecomposeOptions rec{parse_fill(f.fill), f.seed};
  if (!fs::is_directory(f.bundle)) {
    if (f.image.empty()) throw ParameterError("--image is required for a single bundle");
    pipeline_one(f.image, f.bundle, f.out_dir, options, mode, rec, fs::path(f.bundle).stem().string(),
                 log);
    return kExitOk;
  }
  const auto dirs = sample_dirs(f.bundle, "bundle.hab");
  return run_batch(
      dirs.size(), [&](std::size_t i) { return dirs[i].filename().string(); },
      [&](std::size_t i) {
        const auto name = dirs[i].filename();
        pipeline_one(dirs[i] / "image.png", dirs[i] / "bundle.hab", fs::path(f.out_dir) / name,
                     options, mode, rec, name.string(), log);
      },
      log);
}

int cmd_synth(SynthFlags f, Logger& log) {
  static const std::pair<const char*, SinkCorner> corners[] = {
      {"top-left", SinkCorner::kTopLeft},
      {"top-right", SinkCorner::kTopRight},
      {"bottom-left", SinkCorner::kBottomLeft},
      {"bottom-right", SinkCorner::kBottomRight}};
  for (const auto& [name, corner] : corners) {
    if (f.sink_corner == name) f.spec.sink_corner = corner;
  }
  validate(f.spec);
  // Samples are independent given (seed, index); generate in parallel, write in order.
  std::vector<SynthSample> samples(static_cast<std::size_t>(f.spec.count));
  const int code = run_batch(
      samples.size(), [](std::size_t i) { return "sample_" + std::to_string(i); },
      [&](std::size_t i) { samples[i] = generate_sample(f.spec, static_cast<int>(i)); }, log);
  if (code != kExitOk) return code;
  write_samples(samples, f.out_dir);
  log.line("synth", "wrote " + std::to_string(samples.size()) + " samples to " + f.out_dir);
  return kExitOk;
}

int cmd_eval(const EvalFlags& f, std::ostream& out, Logger& log) {
  if (!(f.iou > 0.0 && f.iou <= 1.0)) throw ParameterError("--iou must lie in (0, 1]");
  std::vector<SampleScore> scores;
  if (fs::is_directory(f.gt)) {
    for (const auto& dir : sample_dirs(f.gt, f.gt_name)) {
      const auto gt = read_boxes(dir / f.gt_name);
      if (gt.boxes.empty()) continue;
      const auto pred = read_boxes(fs::path(f.pred) / dir.filename() / f.pred_name);
      scores.push_back(score_sample(dir.filename().string(), pred, gt, f.iou));
    }
  } else {
    const auto gt = read_boxes(f.gt);
    if (gt.boxes.empty()) throw ValidationError("ground-truth file has no boxes");
    scores.push_back(score_sample(fs::path(f.gt).stem().string(), read_boxes(f.pred), gt, f.iou));
  }
  const auto report = summarize(std::move(scores), f.iou);
  const auto text = report_to_json(report);
  if (f.out.empty()) {
    out << text;
  } else {
    write_text_file(text, f.out);
  }
  log.line("eval", "mean recall@" + std::to_string(f.iou) + " = " +
                       std::to_string(report.mean_recall) + " over " +
                       std::to_string(report.samples.size()) + " samples");
  return kExitOk;
}

}  // namespace

unsigned thread_budget() {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HIDE_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attention-guided region extraction and layout-preserving compaction"};
  app.require_subcommand(1);

  PurifyFlags purify_f;
  auto* purify_cmd = app.add_subcommand("purify", "Smooth, normalize and denoise key attention maps");
  purify_cmd->add_option("--bundle", purify_f.bundle, "Input .hab bundle")->required();
  purify_cmd->add_option("--out", purify_f.out, "Output purified .hab bundle")->required();
  purify_cmd->add_option("--sigma", purify_f.sigma, "Gaussian sigma in patches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  RegionsFlags regions_f;
  auto* regions_cmd = app.add_subcommand("regions", "Extract bounding boxes from a bundle");
  regions_cmd->add_option("--bundle", regions_f.bundle, "Input .hab bundle or sample directory")
      ->required();
  regions_cmd->add_option("--out", regions_f.out, "Output boxes JSON (file name in batch mode)")
      ->capture_default_str();
  regions_f.extract.add_to(*regions_cmd);

  CompactFlags compact_f;
  auto* compact_cmd = app.add_subcommand("compact", "Recompose an image from its boxes");
  compact_cmd->add_option("--image", compact_f.image, "Input PNG")->required();
  compact_cmd->add_option("--boxes", compact_f.boxes, "Boxes JSON")->required();
  compact_cmd->add_option("--out", compact_f.out, "Output PNG")->required();
  compact_cmd->add_option("--provenance", compact_f.provenance,
                          "Provenance JSON (default: <out>.provenance.json)");
  compact_cmd->add_option("--fill", compact_f.fill, "Blank-cell color r,g,b")->capture_default_str();
  compact_cmd->add_option("--mode", compact_f.mode, "Recomposition mode")
      ->check(CLI::IsMember({"sequence", "random", "mask", "layout", "compact"}))
      ->capture_default_str();
  compact_cmd->add_option("--seed", compact_f.seed, "Shuffle seed for random tiling")
      ->capture_default_str();

  PipelineFlags pipeline_f;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Bundle + image to boxes, overlay and compact image");
  pipeline_cmd->add_option("--image", pipeline_f.image, "Input PNG (single-bundle mode)");
  pipeline_cmd->add_option("--bundle", pipeline_f.bundle, "Input .hab bundle or sample directory")
      ->required();
  pipeline_cmd->add_option("--out-dir", pipeline_f.out_dir, "Output directory")->required();
  pipeline_cmd->add_option("--fill", pipeline_f.fill, "Blank-cell color r,g,b")->capture_default_str();
  pipeline_cmd->add_option("--mode", pipeline_f.mode, "Recomposition mode")
      ->check(CLI::IsMember({"sequence", "random", "mask", "layout", "compact"}))
      ->capture_default_str();
  pipeline_cmd->add_option("--seed", pipeline_f.seed, "Shuffle seed for random tiling");
  pipeline_f.extract.add_to(*pipeline_cmd);

  SynthFlags synth_f;
  auto& spec = synth_f.spec;
  auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic benchmark");
  synth_cmd->add_option("--out-dir", synth_f.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--count", spec.count, "Number of samples")->capture_default_str();
  synth_cmd->add_option("--patch-rows", spec.patch_rows)->capture_default_str();
  synth_cmd->add_option("--patch-cols", spec.patch_cols)->capture_default_str();
  synth_cmd->add_option("--image-width", spec.image_width)->capture_default_str();
  synth_cmd->add_option("--image-height", spec.image_height)->capture_default_str();
  synth_cmd->add_option("--layer", spec.layer)->capture_default_str();
  synth_cmd->add_option("--tokens", spec.n_tokens, "Key tokens (one blob each)")->capture_default_str();
  synth_cmd->add_option("--noise-tokens", spec.n_noise_tokens)->capture_default_str();
  synth_cmd->add_option("--blob-min", spec.blob_min, "Minimum blob side in patches")
      ->capture_default_str();
  synth_cmd->add_option("--blob-max", spec.blob_max, "Maximum blob side in patches")
      ->capture_default_str();
  synth_cmd->add_option("--signal", spec.signal_amplitude)->capture_default_str();
  synth_cmd->add_option("--sink", spec.sink_amplitude, "Shared sink amplitude")->capture_default_str();
  synth_cmd->add_option("--sink-size", spec.sink_size)->capture_default_str();
  synth_cmd->add_option("--sink-corner", synth_f.sink_corner)
      ->check(CLI::IsMember({"top-left", "top-right", "bottom-left", "bottom-right"}))
      ->capture_default_str();
  synth_cmd->add_option("--noise", spec.noise_std, "Per-patch noise std-dev")->capture_default_str();
  synth_cmd->add_option("--mass", spec.attention_mass, "Total attention mass per map")
      ->capture_default_str();

  EvalFlags eval_f;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted boxes against ground truth");
  eval_cmd->add_option("--pred", eval_f.pred, "Predicted boxes JSON or sample directory")->required();
  eval_cmd->add_option("--gt", eval_f.gt, "Ground-truth boxes JSON or sample directory")->required();
  eval_cmd->add_option("--iou", eval_f.iou, "IoU threshold in (0,1]")->capture_default_str();
  eval_cmd->add_option("--out", eval_f.out, "Report path (default: stdout)");
  eval_cmd->add_option("--pred-name", eval_f.pred_name, "Prediction file name in batch mode")
      ->capture_default_str();
  eval_cmd->add_option("--gt-name", eval_f.gt_name, "Ground-truth file name in batch mode")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Logger log{err, {}};
  try {
    if (*purify_cmd) return cmd_purify(purify_f, log);
    if (*regions_cmd) return cmd_regions(regions_f, log);
    if (*compact_cmd) return cmd_compact(compact_f, log);
    if (*pipeline_cmd) return cmd_pipeline(pipeline_f, log);
    if (*synth_cmd) return cmd_synth(synth_f, log);
    if (*eval_cmd) return cmd_eval(eval_f, out, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace hide::cli
