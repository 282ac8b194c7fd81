#pragma once

#include <vector>

#include "symdet/grid.hpp"

namespace symdet {

/// Normalized frequency coordinates for every sample of an unshifted 2-D DFT
/// (DC at index (0, 0), each axis spanning [-0.5, 0.5)).
struct FrequencyGrid {
  int width = 0;
  int height = 0;
  Grid<double> eta;    // radial frequency, cycles/pixel
  Grid<double> alpha;  // atan2(f_y, f_x) in (-pi, pi], f_y along image rows

  /// Signed normalized frequency of DFT index k along an axis of length n.
  static double axis_frequency(int k, int n) noexcept;
};

FrequencyGrid build_frequency_grid(int width, int height);

struct Butterworth {
  double cutoff = 0.45;
  int order = 15;
};

enum class AngularExponent { linear, squared };

/// 1 / sqrt(1 + (eta / cutoff)^(2 order)).
double butterworth_value(double eta, const Butterworth& lowpass) noexcept;
Grid<double> butterworth(const FrequencyGrid& grid, const Butterworth& lowpass = {});

/// Log-Gaussian radial profile alone, 0 at DC.
Grid<double> log_gaussian_radial(const FrequencyGrid& grid, double eta_s, double sigma_eta);

/// Radial factor including the Butterworth corner suppression.
Grid<double> radial_component(const FrequencyGrid& grid, double eta_s, double sigma_eta,
                              const Butterworth& lowpass = {});

double angular_value(double alpha, double alpha_o, double sigma_alpha,
                     AngularExponent exponent = AngularExponent::linear) noexcept;
Grid<double> angular_component(const FrequencyGrid& grid, double alpha_o, double sigma_alpha,
                               AngularExponent exponent = AngularExponent::linear);

struct FilterBankParams {
  int scales = 12;
  int orientations = 32;
  double sigma_eta = 0.55;
  double sigma_alpha = 0.2;
  double min_wavelength = 3.0;
  double scale_multiplier = 1.45;
  Butterworth lowpass{};
  AngularExponent angular_exponent = AngularExponent::linear;
};

void validate(const FilterBankParams& params);

/// Log-Gabor bank in the Fourier domain. Each kernel is the product of a
/// per-scale radial factor and a per-orientation angular factor; the factors
/// are stored and kernels are formed on demand, so memory grows with S + O
/// rather than S * O.
class FilterBank {
 public:
  FilterBank(int width, int height, const FilterBankParams& params = {});

  int width() const noexcept { return grid_.width; }
  int height() const noexcept { return grid_.height; }
  int scales() const noexcept { return params_.scales; }
  int orientations() const noexcept { return params_.orientations; }
  const FilterBankParams& params() const noexcept { return params_; }
  const FrequencyGrid& grid() const noexcept { return grid_; }

  /// Center frequency of scale s (0-based): (1 / min_wavelength) * m^-s.
  double center_frequency(int s) const { return centers_.at(s); }
  /// Orientation of filter o (0-based): o * pi / O.
  double orientation(int o) const;

  const Grid<double>& radial(int s) const { return radial_.at(s); }
  const Grid<double>& angular(int o) const { return angular_.at(o); }

  Grid<double> kernel(int s, int o) const;

 private:
  FilterBankParams params_;
  FrequencyGrid grid_;
  std::vector<double> centers_;
  std::vector<Grid<double>> radial_;
  std::vector<Grid<double>> angular_;
};

}  // namespace symdet
