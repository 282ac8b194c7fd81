#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "symdet/grid.hpp"

namespace symdet {

/// How the partner's textural histogram is mirrored before intersection.
enum class TextureMirror {
  anchor,  // bin n <- bin (N - n) mod N, reflection about the anchor bin
  index,   // bin n <- bin N - 1 - n
};

/// A sampled feature with its descriptors attached. `texture` is the
/// anchor-shifted textural histogram; `color` the HSV (or luminance) one.
struct SymmetryFeature {
  Point2 position;
  double orientation = 0.0;
  std::vector<double> texture;
  std::vector<double> color;
};

/// Candidate axis of a pair: the perpendicular bisector, as normal angle
/// theta (degrees, [0, 360)) and origin distance rho >= 0.
struct AxisParams {
  double rho = 0.0;
  double theta = 0.0;
};

AxisParams pair_axis_params(Point2 a, Point2 b);

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Reflection across a line with direction angle gamma (radians).
Mat2 reflection_matrix(double gamma) noexcept;

/// |tau_i^T R(gamma) tau_j| with tau = (cos phi, sin phi).
double mirror_term(double phi_i, double phi_j, double gamma) noexcept;

struct WeightFactors {
  double mirror = 0.0;
  double texture = 0.0;
  double color = 0.0;

  double weight() const noexcept { return mirror * texture * color; }
};

WeightFactors weight_factors(const SymmetryFeature& a, const SymmetryFeature& b,
                             TextureMirror mode = TextureMirror::anchor);

/// Unnormalized omega = m * t * q.
double symmetry_weight(const SymmetryFeature& a, const SymmetryFeature& b,
                       TextureMirror mode = TextureMirror::anchor);

struct PairRef {
  std::uint16_t i = 0;
  std::uint16_t j = 0;
};

struct VotingOptions {
  int theta_bins = 360;
  TextureMirror texture_mirror = TextureMirror::anchor;
  int threads = 1;
};

/// (rho, theta) accumulator. Bins are stored with rho along x and theta
/// along y; each bin also lists the pairs that voted into it, in pair order.
class VoteHistogram {
 public:
  VoteHistogram() = default;
  VoteHistogram(int rho_bins, int theta_bins);

  int rho_bins() const noexcept { return bins_.width(); }
  int theta_bins() const noexcept { return bins_.height(); }
  double theta_bin_width() const noexcept { return 360.0 / theta_bins(); }

  const Grid<double>& bins() const noexcept { return bins_; }
  double at(int rho_bin, int theta_bin) const { return bins_(rho_bin, theta_bin); }

  std::span<const PairRef> voters(int rho_bin, int theta_bin) const;

  /// Sum of raw weights before L1 normalization.
  double raw_total() const noexcept { return raw_total_; }
  std::size_t pair_count() const noexcept { return pair_count_; }
  std::size_t voter_count() const noexcept { return voters_.size(); }

  /// Bin of a (rho, theta) sample, or {-1, -1} when rho falls outside.
  std::array<int, 2> bin_of(const AxisParams& axis) const noexcept;

 private:
  friend VoteHistogram accumulate(std::span<const SymmetryFeature>, int, int,
                                  const VotingOptions&);
  Grid<double> bins_;
  std::vector<std::uint32_t> offsets_;
  std::vector<PairRef> voters_;
  double raw_total_ = 0.0;
  std::size_t pair_count_ = 0;
};

int rho_bin_count(int width, int height) noexcept;

/// Votes every pair i < j. Throws no_symmetry_evidence when all weights are 0.
VoteHistogram accumulate(std::span<const SymmetryFeature> features, int width, int height,
                         const VotingOptions& options = {});

/// Separable Gaussian, circular in theta, zero-padded in rho, truncated at 3 sigma.
Grid<double> smooth(const Grid<double>& bins, double sigma_rho, double sigma_theta);

struct NmsWindow {
  int rho = 11;
  int theta = 11;
};

struct Peak {
  double rho = 0.0;    // refined, in pixels (bin centers at index + 0.5)
  double theta = 0.0;  // refined, in degrees
  double score = 0.0;  // value / top value
  double value = 0.0;
  int rho_bin = 0;
  int theta_bin = 0;
};

std::vector<Peak> find_peaks(const Grid<double>& smoothed, int max_peaks, NmsWindow window = {});

struct SymmetryAxis {
  double rho = 0.0;
  double theta = 0.0;  // degrees
  double score = 0.0;
  Point2 a;
  Point2 b;
};

/// Clips the peak's axis line to the convex hull of the features voting
/// within the NMS window around it.
SymmetryAxis axis_endpoints(const Peak& peak, const VoteHistogram& hist,
                            std::span<const Point2> positions, NmsWindow window = {});

}  // namespace symdet
