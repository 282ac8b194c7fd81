#include "symdet/filterbank.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace symdet {

namespace {
constexpr double kPi = std::numbers::pi;
}

double FrequencyGrid::axis_frequency(int k, int n) noexcept {
  // Indices past the midpoint alias to negative frequencies; for even n the
  // Nyquist sample k = n/2 maps to -0.5.
  const int signed_k = (k < (n + 1) / 2) ? k : k - n;
  return static_cast<double>(signed_k) / static_cast<double>(n);
}

FrequencyGrid build_frequency_grid(int width, int height) {
  require(width >= 2 && height >= 2, "frequency grid needs width and height >= 2, got " +
                                         std::to_string(width) + "x" + std::to_string(height));
  FrequencyGrid grid{width, height, Grid<double>(width, height), Grid<double>(width, height)};
  for (int y = 0; y < height; ++y) {
    const double fy = FrequencyGrid::axis_frequency(y, height);
    for (int x = 0; x < width; ++x) {
      const double fx = FrequencyGrid::axis_frequency(x, width);
      grid.eta(x, y) = std::hypot(fx, fy);
      grid.alpha(x, y) = std::atan2(fy, fx);
    }
  }
  return grid;
}

double butterworth_value(double eta, const Butterworth& lowpass) noexcept {
  return 1.0 / std::sqrt(1.0 + std::pow(eta / lowpass.cutoff, 2.0 * lowpass.order));
}

Grid<double> butterworth(const FrequencyGrid& grid, const Butterworth& lowpass) {
  require(lowpass.cutoff > 0.0, "butterworth cutoff must be positive");
  require(lowpass.order >= 1, "butterworth order must be >= 1");
  Grid<double> out(grid.width, grid.height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = butterworth_value(grid.eta[i], lowpass);
  return out;
}

Grid<double> log_gaussian_radial(const FrequencyGrid& grid, double eta_s, double sigma_eta) {
  if (!(eta_s > 0.0 && eta_s < 0.5))
    fail(ErrorKind::invalid_argument,
         "radial center frequency must lie in (0, 0.5), got " + std::to_string(eta_s));
  require(sigma_eta > 0.0 && sigma_eta < 1.0, "sigma_eta must lie in (0, 1)");
  const double denom = 2.0 * std::pow(std::log(sigma_eta), 2);
  Grid<double> out(grid.width, grid.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double eta = grid.eta[i];
    out[i] = eta > 0.0 ? std::exp(-std::pow(std::log(eta / eta_s), 2) / denom) : 0.0;
  }
  return out;
}

Grid<double> radial_component(const FrequencyGrid& grid, double eta_s, double sigma_eta,
                              const Butterworth& lowpass) {
  Grid<double> out = log_gaussian_radial(grid, eta_s, sigma_eta);
  const Grid<double> u = butterworth(grid, lowpass);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= u[i];
  return out;
}

double angular_value(double alpha, double alpha_o, double sigma_alpha,
                     AngularExponent exponent) noexcept {
  const double delta = alpha - alpha_o;
  const double dist = std::abs(std::atan2(std::sin(delta), std::cos(delta)));
  const double d = exponent == AngularExponent::linear ? dist : dist * dist;
  return std::exp(-d / (2.0 * sigma_alpha * sigma_alpha));
}

Grid<double> angular_component(const FrequencyGrid& grid, double alpha_o, double sigma_alpha,
                               AngularExponent exponent) {
  require(sigma_alpha > 0.0, "sigma_alpha must be positive");
  Grid<double> out(grid.width, grid.height);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = angular_value(grid.alpha[i], alpha_o, sigma_alpha, exponent);
  return out;
}

void validate(const FilterBankParams& p) {
  require(p.scales >= 1, "scales must be >= 1");
  require(p.orientations >= 1, "orientations must be >= 1");
  require(p.min_wavelength >= 2.0, "min_wavelength must be >= 2 pixels");
  require(p.scale_multiplier > 1.0, "scale_multiplier must be > 1");
  require(p.sigma_eta > 0.0 && p.sigma_eta < 1.0, "sigma_eta must lie in (0, 1)");
  require(p.sigma_alpha > 0.0, "sigma_alpha must be positive");
  require(p.lowpass.cutoff > 0.0, "butterworth cutoff must be positive");
  require(p.lowpass.order >= 1, "butterworth order must be >= 1");
  // min_wavelength == 2 puts the finest scale exactly on Nyquist.
  if (1.0 / p.min_wavelength >= 0.5)
    fail(ErrorKind::invalid_argument, "finest scale center frequency reaches Nyquist (aliasing)");
}

FilterBank::FilterBank(int width, int height, const FilterBankParams& params)
    : params_(params), grid_(build_frequency_grid(width, height)) {
  validate(params_);
  centers_.reserve(params_.scales);
  radial_.reserve(params_.scales);
  for (int s = 0; s < params_.scales; ++s) {
    const double eta_s = (1.0 / params_.min_wavelength) * std::pow(params_.scale_multiplier, -s);
    centers_.push_back(eta_s);
    radial_.push_back(radial_component(grid_, eta_s, params_.sigma_eta, params_.lowpass));
  }
  angular_.reserve(params_.orientations);
  for (int o = 0; o < params_.orientations; ++o)
    angular_.push_back(
        angular_component(grid_, orientation(o), params_.sigma_alpha, params_.angular_exponent));
}

double FilterBank::orientation(int o) const {
  require(o >= 0 && o < params_.orientations, "orientation index out of range");
  return o * kPi / params_.orientations;
}

Grid<double> FilterBank::kernel(int s, int o) const {
  const Grid<double>& r = radial_.at(s);
  const Grid<double>& a = angular_.at(o);
  Grid<double> out(width(), height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[i] * a[i];
  return out;
}

}  // namespace symdet
