#pragma once

#include "symdet/grid.hpp"

namespace symdet {

/// Linear RGB triplet, each channel in [0, 1].
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  bool operator==(const Rgb&) const = default;
};

/// Hexcone HSV: hue in radians [0, 2pi), saturation and value in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// RGB raster. `single_channel` records that the source had no color, which
/// switches color histograms to the luminance fallback.
struct ColorImage {
  Grid<Rgb> pixels;
  bool single_channel = false;

  int width() const noexcept { return pixels.width(); }
  int height() const noexcept { return pixels.height(); }
};

double luminance(const Rgb& c) noexcept;
Hsv rgb_to_hsv(const Rgb& c) noexcept;

Grid<double> to_grayscale(const ColorImage& image);
Grid<Hsv> to_hsv(const ColorImage& image);

double mean_saturation(const Grid<Hsv>& hsv);

/// Builds a ColorImage from interleaved 8-bit samples (1 or 3 channels, RGB order).
ColorImage image_from_u8(const unsigned char* data, int width, int height, int channels);

}  // namespace symdet
