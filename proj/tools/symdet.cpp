// symdet: reflection symmetry detection and evaluation from the command line.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symdet/config.hpp"
#include "symdet/detail/parallel.hpp"
#include "symdet/error.hpp"
#include "symdet/imageio.hpp"
#include "symdet/pipeline.hpp"
#include "symdet/records.hpp"

namespace fs = std::filesystem;
using namespace symdet;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,  // bad flags or invalid parameter values
  kIo = 3,
  kParse = 4,  // malformed config, detection, groundtruth or size file
  kNoFeatures = 5,
  kNoEvidence = 6,
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return kUsage;
    case ErrorKind::io:
      return kIo;
    case ErrorKind::parse:
      return kParse;
    case ErrorKind::no_features:
      return kNoFeatures;
    case ErrorKind::no_symmetry_evidence:
      return kNoEvidence;
  }
  return kUnexpected;
}

struct ConfigSource {
  std::string config_path;
  std::map<std::string, std::string> overrides;  // key -> flag value
};

// Defaults, then the file named by SYMDET_CONFIG (unless --config is given),
// then --config, then individual flags.
Config resolve_config(const ConfigSource& src) {
  Config config;
  if (!src.config_path.empty()) {
    config = load_config(src.config_path);
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    config = load_config(env);
  }
  for (const auto& [key, value] : src.overrides) config.set(key, value);
  validate(config);
  return config;
}

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".tif" ||
         ext == ".tiff";
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file_atomic(path, text);
}

DetectionRecord pick_record(const std::vector<DetectionRecord>& records, const std::string& id,
                            const std::string& fallback_id) {
  const std::string& want = id.empty() ? fallback_id : id;
  for (const DetectionRecord& r : records)
    if (r.image_id == want) return r;
  if (id.empty() && records.size() == 1) return records.front();
  if (id.empty() && records.empty()) return {fallback_id, {}};
  fail(ErrorKind::invalid_argument, "no detections for image id '" + want + "'");
}

nlohmann::json report_json(const EvalReport& r, Regime regime) {
  nlohmann::json curve = nlohmann::json::array();
  for (const PrPoint& p : r.curve)
    curve.push_back({{"threshold", p.threshold}, {"precision", p.precision}, {"recall", p.recall}});
  return {{"regime", r.regime},
          {"gamma_degrees", threshold_regime(regime).gamma_degrees},
          {"images", r.images},
          {"groundtruth", r.groundtruth},
          {"tp", r.tp},
          {"fp", r.fp},
          {"fn", r.fn},
          {"top1_tp", r.top1_tp},
          {"max_f1", r.max_f1},
          {"curve", curve}};
}

struct DetectOptions {
  std::string image;
  std::string output;
  std::string id;
  std::string overlay;
  std::string heatmap;
  int top_k = 5;
};

int run_detect(const DetectOptions& opt, const Config& config) {
  const ColorImage image = load_image(opt.image);
  const Detection d = detect(image, config);
  const std::string id = opt.id.empty() ? fs::path(opt.image).stem().string() : opt.id;
  const std::vector<DetectionRecord> records{make_detection_record(id, d.axes)};
  write_or_print(opt.output, format_detections(records));
  if (!opt.overlay.empty()) write_image(opt.overlay, render_overlay(image, records.front(), opt.top_k));
  if (!opt.heatmap.empty()) write_image(opt.heatmap, export_heatmap(d.smoothed));
  return kOk;
}

struct EvaluateOptions {
  std::string detections;
  std::string groundtruth;
  std::string dialect = "generic";
  std::string sizes;
  std::string regime = "all";
  std::string output;
};

int run_evaluate(const EvaluateOptions& opt) {
  std::vector<Regime> regimes;
  if (opt.regime == "all") {
    regimes.assign(all_regimes().begin(), all_regimes().end());
    if (opt.sizes.empty()) {
      std::cerr << "symdet: no --sizes given, skipping ICCV2017\n";
      regimes.pop_back();
    }
  } else {
    regimes.push_back(parse_regime(opt.regime).regime);
    if (regimes.front() == Regime::iccv2017 && opt.sizes.empty())
      fail(ErrorKind::invalid_argument, "ICCV2017 needs image sizes (--sizes)");
  }

  const auto items = join_records(read_detections(fs::path(opt.detections)),
                                  parse_groundtruth(fs::path(opt.groundtruth), parse_dialect(opt.dialect)),
                                  opt.sizes.empty() ? std::map<std::string, ImageSize>{}
                                                    : read_image_sizes(fs::path(opt.sizes)));
  if (!opt.sizes.empty())
    for (const EvalItem& item : items)
      if (item.size.width <= 0)
        fail(ErrorKind::invalid_argument, "no image size for '" + item.image_id + "'");

  nlohmann::json out = {{"reports", nlohmann::json::array()}};
  for (Regime regime : regimes) {
    const EvalReport r = evaluate(items, regime);
    out["reports"].push_back(report_json(r, regime));
    std::fprintf(stderr, "%-9s images %d  gt %d  tp %d  fp %d  fn %d  top1 %d  maxF1 %.4f\n",
                 r.regime.c_str(), r.images, r.groundtruth, r.tp, r.fp, r.fn, r.top1_tp, r.max_f1);
  }
  write_or_print(opt.output, out.dump(2) + "\n");
  return kOk;
}

struct OverlayOptions {
  std::string image;
  std::string detections;
  std::string output;
  std::string id;
  int top_k = 5;
};

int run_overlay(const OverlayOptions& opt) {
  const ColorImage image = load_image(opt.image);
  const auto records = read_detections(fs::path(opt.detections));
  const DetectionRecord record = pick_record(records, opt.id, fs::path(opt.image).stem().string());
  write_image(opt.output, render_overlay(image, record, opt.top_k));
  return kOk;
}

struct HeatmapOptions {
  std::string image;
  std::string output;
};

int run_heatmap(const HeatmapOptions& opt, const Config& config) {
  const Detection d = detect(load_image(opt.image), config);
  write_image(opt.output, export_heatmap(d.smoothed));
  return kOk;
}

struct BatchOptions {
  std::string input;
  std::string output;
  int jobs = 1;
  bool overlays = false;
  bool heatmaps = false;
  int top_k = 5;
};

// Detects every image of a directory in sorted file-name order. Per-image
// results go to <output>/<id>.txt; the combined file and the size table are
// written once all images are done. Images without features or evidence
// contribute no axes and are reported on stderr.
int run_batch(const BatchOptions& opt, Config config) {
  if (!fs::is_directory(opt.input)) fail(ErrorKind::io, "not a directory: " + opt.input);
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(opt.input))
    if (entry.is_regular_file() && is_image(entry.path())) images.push_back(entry.path());
  std::sort(images.begin(), images.end());
  if (images.empty()) fail(ErrorKind::io, "no images found in " + opt.input);
  fs::create_directories(opt.output);

  const int jobs = std::max(1, opt.jobs);
  if (jobs > 1) config.threads = 1;  // parallelize across images instead of within

  std::vector<DetectionRecord> records(images.size());
  std::vector<ImageSize> sizes(images.size());
  std::vector<int> status(images.size(), kOk);
  std::mutex log_mutex;
  detail::parallel_for(images.size(), jobs, [&](std::size_t i) {
    const std::string id = images[i].stem().string();
    records[i].image_id = id;
    try {
      const ColorImage image = load_image(images[i]);
      sizes[i] = {image.width(), image.height()};
      try {
        const Detection d = detect(image, config);
        records[i] = make_detection_record(id, d.axes);
        if (opt.heatmaps) write_image(fs::path(opt.output) / (id + "_heatmap.png"), export_heatmap(d.smoothed));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::no_features && e.kind() != ErrorKind::no_symmetry_evidence) throw;
        std::lock_guard lock(log_mutex);
        std::cerr << "symdet: " << id << ": " << e.what() << "\n";
      }
      const std::vector<DetectionRecord> one{records[i]};
      write_file_atomic(fs::path(opt.output) / (id + ".txt"), format_detections(one));
      if (opt.overlays)
        write_image(fs::path(opt.output) / (id + "_overlay.png"), render_overlay(image, records[i], opt.top_k));
    } catch (const Error& e) {
      std::lock_guard lock(log_mutex);
      std::cerr << "symdet: " << images[i].string() << ": " << e.what() << "\n";
      status[i] = exit_code(e.kind());
    }
  });

  std::map<std::string, ImageSize> size_table;
  std::vector<DetectionRecord> done;
  int worst = kOk;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (status[i] != kOk) {
      worst = worst == kOk ? status[i] : worst;
      continue;
    }
    if (!size_table.emplace(records[i].image_id, sizes[i]).second)
      fail(ErrorKind::invalid_argument, "duplicate image id '" + records[i].image_id + "'");
    done.push_back(records[i]);
  }
  write_file_atomic(fs::path(opt.output) / "detections.txt", format_detections(done));
  std::ostringstream size_text;
  write_image_sizes(size_text, size_table);
  write_file_atomic(fs::path(opt.output) / "sizes.txt", size_text.str());
  std::cerr << "symdet: " << done.size() << " of " << images.size() << " images processed\n";
  return worst;
}

void add_config_flags(CLI::App& app, ConfigSource& src) {
  app.add_option("--config", src.config_path,
                 std::string("Config file of key = value lines (default: $") + kConfigEnvVar + ")");
  for (const ConfigKey& key : config_keys()) {
    const std::string name(key.name);
    app.add_option_function<std::string>(
           "--" + name, [&src, name](const std::string& v) { src.overrides[name] = v; },
           std::string(key.help))
        ->group("Pipeline parameters");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflection symmetry detection and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "symdet 0.1.0");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the effective configuration to stderr");

  ConfigSource config_src;

  DetectOptions det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect symmetry axes in one image");
  detect_cmd->add_option("image", det.image, "Input image")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("-o,--output", det.output, "Detection file (default: stdout)");
  detect_cmd->add_option("--id", det.id, "Image id written to the detection file (default: file stem)");
  detect_cmd->add_option("--overlay", det.overlay, "Also write an overlay image");
  detect_cmd->add_option("--heatmap", det.heatmap, "Also write the smoothed vote heatmap");
  detect_cmd->add_option("--top-k", det.top_k, "Axes drawn on the overlay")->check(CLI::NonNegativeNumber);
  add_config_flags(*detect_cmd, config_src);

  EvaluateOptions ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score detections against groundtruth");
  eval_cmd->add_option("detections", ev.detections, "Detection file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("groundtruth", ev.groundtruth, "Groundtruth file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dialect", ev.dialect, "generic | csv | matlab (aliases: ava, psu, ny, nyu, iccv2017)");
  eval_cmd->add_option("--sizes", ev.sizes, "Image size table (`id width height`)")->check(CLI::ExistingFile);
  eval_cmd->add_option("--regime", ev.regime, "CVPR2011 | CVPR2013 | ICCV2017 | all");
  eval_cmd->add_option("-o,--output", ev.output, "JSON report (default: stdout)");

  OverlayOptions ov;
  auto* overlay_cmd = app.add_subcommand("overlay", "Draw detected axes onto an image");
  overlay_cmd->add_option("image", ov.image, "Input image")->required()->check(CLI::ExistingFile);
  overlay_cmd->add_option("detections", ov.detections, "Detection file")->required()->check(CLI::ExistingFile);
  overlay_cmd->add_option("-o,--output", ov.output, "Output image")->required();
  overlay_cmd->add_option("--id", ov.id, "Image id to draw (default: file stem)");
  overlay_cmd->add_option("--top-k", ov.top_k, "Number of axes drawn")->check(CLI::NonNegativeNumber);

  HeatmapOptions hm;
  auto* heatmap_cmd = app.add_subcommand("heatmap", "Export the smoothed (rho, theta) vote histogram");
  heatmap_cmd->add_option("image", hm.image, "Input image")->required()->check(CLI::ExistingFile);
  heatmap_cmd->add_option("-o,--output", hm.output, "Output image")->required();
  add_config_flags(*heatmap_cmd, config_src);

  BatchOptions bt;
  auto* batch_cmd = app.add_subcommand("batch", "Detect every image of a directory");
  batch_cmd->add_option("input", bt.input, "Image directory")->required();
  batch_cmd->add_option("-o,--output", bt.output, "Output directory")->required();
  batch_cmd->add_option("-j,--jobs", bt.jobs, "Images processed in parallel")->check(CLI::PositiveNumber);
  batch_cmd->add_flag("--overlays", bt.overlays, "Write <id>_overlay.png per image");
  batch_cmd->add_flag("--heatmaps", bt.heatmaps, "Write <id>_heatmap.png per image");
  batch_cmd->add_option("--top-k", bt.top_k, "Axes drawn on overlays")->check(CLI::NonNegativeNumber);
  add_config_flags(*batch_cmd, config_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const bool needs_config = detect_cmd->parsed() || heatmap_cmd->parsed() || batch_cmd->parsed();
    const Config config = needs_config ? resolve_config(config_src) : Config{};
    if (print_config) std::cerr << config.to_text();
    if (detect_cmd->parsed()) return run_detect(det, config);
    if (eval_cmd->parsed()) return run_evaluate(ev);
    if (overlay_cmd->parsed()) return run_overlay(ov);
    if (heatmap_cmd->parsed()) return run_heatmap(hm, config);
    if (batch_cmd->parsed()) return run_batch(bt, config);
  } catch (const Error& e) {
    std::cerr << "symdet: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "symdet: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUsage;
}
