#pragma once

#include <vector>

#include "symdet/filterbank.hpp"
#include "symdet/grid.hpp"
#include "symdet/image.hpp"

namespace symdet {

/// |IFT(FT(gray) * kernel(s, o))| for every filter, indexed s * O + o.
struct ResponseStack {
  int scales = 0;
  int orientations = 0;
  std::vector<Grid<double>> responses;

  const Grid<double>& at(int s, int o) const { return responses.at(s * orientations + o); }
};

struct EdgeMaps {
  Grid<double> amplitude;    // J, globally max-normalized to [0, 1]
  Grid<double> orientation;  // phi in [-pi/2, pi/2)
  Grid<int> filter_index;    // argmax s * O + o, -1 when degenerate
  bool degenerate = false;   // no measurable response anywhere
};

struct FeaturePoint {
  int x = 0;
  int y = 0;
  double amplitude = 0.0;
  double orientation = 0.0;
  Hsv color{};
  int cell_id = 0;
  PixelRect cell{};
};

ResponseStack apply_filter_bank(const Grid<double>& gray, const FilterBank& bank, int threads = 1);

/// Folds a response stack into amplitude/orientation maps. Ties on the
/// maximum go to the lowest s * O + o index.
EdgeMaps edge_maps(const ResponseStack& stack, const FilterBank& bank);

/// Same result as edge_maps(apply_filter_bank(gray, bank), bank) without
/// materializing the S * O responses.
EdgeMaps compute_edge_maps(const Grid<double>& gray, const FilterBank& bank, int threads = 1);

/// Maps a filter orientation in [0, pi) onto [-pi/2, pi/2).
double wrap_half_turn(double angle) noexcept;

/// Tiles the image into cell_size x cell_size cells (row-major ids) and emits
/// one feature per cell whose peak amplitude exceeds the threshold.
std::vector<FeaturePoint> sample_feature_points(const EdgeMaps& maps, const Grid<Hsv>& hsv,
                                                int cell_size, double homogeneity_threshold);

int default_cell_size(int width, int height, int divisor = 64);

}  // namespace symdet
