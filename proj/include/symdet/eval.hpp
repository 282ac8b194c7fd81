#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symdet/grid.hpp"

namespace symdet {

struct AxisSegment {
  Point2 a;
  Point2 b;
  std::optional<double> score;

  Point2 direction() const noexcept { return {a.x - b.x, a.y - b.y}; }
  Point2 midpoint() const noexcept { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }
  double length() const noexcept;
};

enum class Regime { cvpr2011, cvpr2013, iccv2017 };

struct ThresholdRegime {
  Regime regime;
  std::string_view name;
  double gamma_degrees;
};

ThresholdRegime threshold_regime(Regime regime) noexcept;
ThresholdRegime parse_regime(std::string_view name);
std::span<const Regime> all_regimes() noexcept;

struct ImageSize {
  int width = 0;
  int height = 0;
};

/// Angle between two segments folded into [0, 90] degrees.
double angle_between(const AxisSegment& sc, const AxisSegment& gt);

/// Midpoint-distance threshold for a detection/groundtruth pair.
double distance_threshold(const AxisSegment& sc, const AxisSegment& gt, Regime regime,
                          ImageSize image);

bool is_true_positive(const AxisSegment& sc, const AxisSegment& gt, Regime regime,
                      ImageSize image);

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<std::pair<int, int>> matches;  // (detection index, gt index)
};

/// Greedy one-to-one matching: detections in descending score order (stable
/// for ties) each claim the first unmatched groundtruth they satisfy.
MatchResult match(std::span<const AxisSegment> detections, std::span<const AxisSegment> gts,
                  Regime regime, ImageSize image);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

std::vector<PrPoint> pr_curve(std::span<const AxisSegment> detections,
                              std::span<const AxisSegment> gts, Regime regime, ImageSize image);

double max_f1(std::span<const PrPoint> curve);

/// One image's detections and groundtruth for dataset-level evaluation.
struct EvalItem {
  std::string image_id;
  ImageSize size;
  std::vector<AxisSegment> detections;
  std::vector<AxisSegment> groundtruth;
};

struct EvalReport {
  std::string regime;
  int tp = 0;  // at the lowest score threshold (all detections kept)
  int fp = 0;
  int fn = 0;
  int top1_tp = 0;  // images whose best detection matches some groundtruth
  int images = 0;
  int groundtruth = 0;
  std::vector<PrPoint> curve;
  double max_f1 = 0.0;
};

/// Pools TP/FP/FN over all items at every distinct score threshold.
EvalReport evaluate(std::span<const EvalItem> items, Regime regime);

}  // namespace symdet
