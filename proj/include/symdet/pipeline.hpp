#pragma once

#include <vector>

#include "symdet/config.hpp"
#include "symdet/features.hpp"
#include "symdet/image.hpp"
#include "symdet/voting.hpp"

namespace symdet {

struct Detection {
  std::vector<SymmetryAxis> axes;  // descending score, top score 1
  std::vector<FeaturePoint> features;
  VoteHistogram histogram;
  Grid<double> smoothed;
  int cell_size = 0;
  bool luminance_histograms = false;
};

/// Attaches textural and color histograms to sampled features.
std::vector<SymmetryFeature> describe_features(std::span<const FeaturePoint> features,
                                               const EdgeMaps& maps, const Grid<double>& gray,
                                               const Grid<Hsv>& hsv, int cell_size,
                                               bool luminance, const Config& config);

/// Keeps the `limit` highest-amplitude features (ties by cell order), in cell order.
std::vector<FeaturePoint> cap_features(std::vector<FeaturePoint> features, int limit);

/// Full pipeline: edge features, descriptors, voting, peaks and axis extents.
/// Throws no_features when every cell is homogeneous and
/// no_symmetry_evidence when no pair carries weight.
Detection detect(const ColorImage& image, const Config& config = {});

}  // namespace symdet
