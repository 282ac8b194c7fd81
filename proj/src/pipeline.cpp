#include "symdet/pipeline.hpp"

#include <algorithm>

#include "symdet/histograms.hpp"

namespace symdet {

std::vector<FeaturePoint> cap_features(std::vector<FeaturePoint> features, int limit) {
  if (limit <= 0 || features.size() <= static_cast<std::size_t>(limit)) return features;
  std::stable_sort(features.begin(), features.end(),
                   [](const FeaturePoint& a, const FeaturePoint& b) { return a.amplitude > b.amplitude; });
  features.resize(limit);
  std::sort(features.begin(), features.end(),
            [](const FeaturePoint& a, const FeaturePoint& b) { return a.cell_id < b.cell_id; });
  return features;
}

std::vector<SymmetryFeature> describe_features(std::span<const FeaturePoint> features,
                                               const EdgeMaps& maps, const Grid<double>& gray,
                                               const Grid<Hsv>& hsv, int cell_size,
                                               bool luminance, const Config& config) {
  std::vector<SymmetryFeature> out;
  out.reserve(features.size());
  for (const FeaturePoint& f : features) {
    SymmetryFeature sf;
    sf.position = {static_cast<double>(f.x), static_cast<double>(f.y)};
    sf.orientation = f.orientation;
    sf.texture = textural_histogram(f.cell, maps.amplitude, maps.orientation, config.texture_bins,
                                    f.orientation)
                     .bins;
    // Odd-sided window so it is centered exactly on the feature pixel.
    const PixelRect window = centered_window(f.x, f.y, cell_size, gray.width(), gray.height());
    sf.color = luminance ? grayscale_color_histogram(window, gray, config.color_layout.size()).bins
                         : color_histogram(window, hsv, config.color_layout).bins;
    out.push_back(std::move(sf));
  }
  return out;
}

Detection detect(const ColorImage& image, const Config& config) {
  validate(config);
  require(image.width() >= 2 && image.height() >= 2, "detect: image must be at least 2x2");
  const int threads = config.effective_threads();

  const Grid<double> gray = to_grayscale(image);
  const Grid<Hsv> hsv = to_hsv(image);
  const FilterBank bank(image.width(), image.height(), config.filters);
  const EdgeMaps maps = compute_edge_maps(gray, bank, threads);

  Detection result;
  result.cell_size = default_cell_size(image.width(), image.height(), config.cell_divisor);
  result.features = cap_features(
      sample_feature_points(maps, hsv, result.cell_size, config.homogeneity_threshold),
      config.max_features);
  if (result.features.empty()) fail(ErrorKind::no_features, "no features: image is homogeneous");

  result.luminance_histograms =
      image.single_channel || mean_saturation(hsv) < config.grayscale_saturation;
  const std::vector<SymmetryFeature> described =
      describe_features(result.features, maps, gray, hsv, result.cell_size,
                        result.luminance_histograms, config);

  result.histogram = accumulate(described, image.width(), image.height(),
                                {config.theta_bins, config.texture_mirror, threads});
  result.smoothed =
      smooth(result.histogram.bins(), config.smoothing_sigma_rho, config.smoothing_sigma_theta);

  std::vector<Point2> positions;
  positions.reserve(described.size());
  for (const SymmetryFeature& f : described) positions.push_back(f.position);
  for (const Peak& peak : find_peaks(result.smoothed, config.max_peaks, config.nms))
    result.axes.push_back(axis_endpoints(peak, result.histogram, positions, config.nms));
  return result;
}

}  // namespace symdet
