#include "symdet/eval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

namespace symdet {

namespace {

constexpr std::array<Regime, 3> kRegimes{Regime::cvpr2011, Regime::cvpr2013, Regime::iccv2017};

std::vector<int> score_order(std::span<const AxisSegment> detections) {
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return detections[x].score.value_or(0.0) > detections[y].score.value_or(0.0);
  });
  return order;
}

std::vector<double> distinct_scores_desc(std::vector<double> scores) {
  std::sort(scores.begin(), scores.end(), std::greater<>());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
  return scores;
}

}  // namespace

double AxisSegment::length() const noexcept {
  const Point2 v = direction();
  return std::hypot(v.x, v.y);
}

ThresholdRegime threshold_regime(Regime regime) noexcept {
  switch (regime) {
    case Regime::cvpr2011:
      return {regime, "CVPR2011", 10.0};
    case Regime::cvpr2013:
      return {regime, "CVPR2013", 10.0};
    case Regime::iccv2017:
      break;
  }
  return {Regime::iccv2017, "ICCV2017", 3.0};
}

ThresholdRegime parse_regime(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Regime r : kRegimes)
    if (threshold_regime(r).name == upper) return threshold_regime(r);
  fail(ErrorKind::invalid_argument, "unknown evaluation regime '" + std::string(name) +
                                        "' (expected CVPR2011, CVPR2013 or ICCV2017)");
}

std::span<const Regime> all_regimes() noexcept { return kRegimes; }

double angle_between(const AxisSegment& sc, const AxisSegment& gt) {
  const Point2 u = sc.direction();
  const Point2 v = gt.direction();
  require(sc.length() > 0.0 && gt.length() > 0.0, "angle_between: zero-length segment");
  const double cross = std::abs(u.x * v.y - u.y * v.x);
  const double dot = u.x * v.x + u.y * v.y;
  const double gamma = std::atan2(cross, dot) * 180.0 / std::numbers::pi;
  return gamma > 90.0 ? 180.0 - gamma : gamma;
}

double distance_threshold(const AxisSegment& sc, const AxisSegment& gt, Regime regime,
                          ImageSize image) {
  switch (regime) {
    case Regime::cvpr2011:
      return 0.2 * gt.length();
    case Regime::cvpr2013:
      return 0.2 * std::min(sc.length(), gt.length());
    case Regime::iccv2017:
      require(image.width > 0 && image.height > 0, "ICCV2017 regime needs the image size");
      return 0.025 * std::min(image.width, image.height);
  }
  fail(ErrorKind::invalid_argument, "unknown evaluation regime");
}

bool is_true_positive(const AxisSegment& sc, const AxisSegment& gt, Regime regime,
                      ImageSize image) {
  if (!(angle_between(sc, gt) < threshold_regime(regime).gamma_degrees)) return false;
  const Point2 ts = sc.midpoint();
  const Point2 tg = gt.midpoint();
  return std::hypot(ts.x - tg.x, ts.y - tg.y) < distance_threshold(sc, gt, regime, image);
}

MatchResult match(std::span<const AxisSegment> detections, std::span<const AxisSegment> gts,
                  Regime regime, ImageSize image) {
  MatchResult result;
  std::vector<char> taken(gts.size(), 0);
  for (int d : score_order(detections)) {
    bool matched = false;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || !is_true_positive(detections[d], gts[g], regime, image)) continue;
      taken[g] = 1;
      result.matches.emplace_back(d, static_cast<int>(g));
      matched = true;
      break;
    }
    if (matched)
      ++result.tp;
    else
      ++result.fp;
  }
  result.fn = static_cast<int>(gts.size()) - result.tp;
  return result;
}

std::vector<PrPoint> pr_curve(std::span<const AxisSegment> detections,
                              std::span<const AxisSegment> gts, Regime regime, ImageSize image) {
  const EvalItem item{"", image, {detections.begin(), detections.end()}, {gts.begin(), gts.end()}};
  if (gts.empty()) fail(ErrorKind::invalid_argument, "pr_curve: empty groundtruth");
  return evaluate(std::span<const EvalItem>(&item, 1), regime).curve;
}

double max_f1(std::span<const PrPoint> curve) {
  double best = 0.0;
  for (const PrPoint& p : curve) {
    const double denom = p.precision + p.recall;
    if (denom > 0.0) best = std::max(best, 2.0 * p.precision * p.recall / denom);
  }
  return best;
}

EvalReport evaluate(std::span<const EvalItem> items, Regime regime) {
  EvalReport report;
  report.regime = std::string(threshold_regime(regime).name);
  report.images = static_cast<int>(items.size());
  std::vector<double> scores;
  for (const EvalItem& item : items) {
    report.groundtruth += static_cast<int>(item.groundtruth.size());
    for (const AxisSegment& d : item.detections) scores.push_back(d.score.value_or(0.0));
  }
  if (report.groundtruth == 0) fail(ErrorKind::invalid_argument, "evaluate: empty groundtruth");

  for (double tau : distinct_scores_desc(scores)) {
    int tp = 0, fp = 0, fn = 0;
    for (const EvalItem& item : items) {
      std::vector<AxisSegment> kept;
      for (const AxisSegment& d : item.detections)
        if (d.score.value_or(0.0) >= tau) kept.push_back(d);
      const MatchResult m = match(kept, item.groundtruth, regime, item.size);
      tp += m.tp;
      fp += m.fp;
      fn += m.fn;
    }
    const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    report.curve.push_back({tau, precision, recall});
    report.tp = tp;
    report.fp = fp;
    report.fn = fn;
  }
  if (report.curve.empty()) {
    // Nothing detected: precision is vacuously 1, recall 0.
    report.fn = report.groundtruth;
    report.curve.push_back({1.0, 1.0, 0.0});
  }
  report.max_f1 = max_f1(report.curve);

  for (const EvalItem& item : items) {
    if (item.detections.empty()) continue;
    const AxisSegment& best = item.detections[score_order(item.detections).front()];
    for (const AxisSegment& gt : item.groundtruth)
      if (is_true_positive(best, gt, regime, item.size)) {
        ++report.top1_tp;
        break;
      }
  }
  return report;
}

}  // namespace symdet
