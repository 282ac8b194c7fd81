#pragma once

#include <span>
#include <vector>

#include "symdet/grid.hpp"
#include "symdet/image.hpp"

namespace symdet {

/// Amplitude-weighted orientation histogram over a cell, L1-normalized and
/// circularly shifted so the anchor's bin sits at index 0.
struct TexturalHistogram {
  std::vector<double> bins;
  double anchor = 0.0;
};

struct ColorLayout {
  int hue = 8;
  int saturation = 2;
  int value = 2;

  int size() const noexcept { return hue * saturation * value; }
  int flat_index(int h, int s, int v) const noexcept { return (h * saturation + s) * value + v; }
};

struct ColorHistogram {
  std::vector<double> bins;
};

/// Bin of an orientation (any real angle, taken modulo pi) among N bins of
/// width pi/N starting at 0.
int orientation_bin(double phi, int bins) noexcept;

TexturalHistogram textural_histogram(const PixelRect& cell, const Grid<double>& amplitude,
                                     const Grid<double>& orientation, int bins, double anchor);

ColorHistogram color_histogram(const PixelRect& window, const Grid<Hsv>& hsv,
                               const ColorLayout& layout = {});

/// Luminance histogram over [0, 1] used in place of HSV for colorless input.
ColorHistogram grayscale_color_histogram(const PixelRect& window, const Grid<double>& gray,
                                         int bins);

/// Square window of half-width `radius` centered on (x, y), clipped to the image.
PixelRect centered_window(int x, int y, int radius, int width, int height) noexcept;

/// In-place L1 normalization; all-zero input stays all-zero.
void l1_normalize(std::span<double> bins) noexcept;

/// out[n] = in[(n + shift) mod N].
std::vector<double> circular_shift(std::span<const double> bins, int shift);

/// Plain index mirror: out[n] = in[N - 1 - n].
std::vector<double> reverse(std::span<const double> bins);
TexturalHistogram reverse(const TexturalHistogram& h);

/// Mirror about bin 0: out[n] = in[(N - n) mod N]. For anchor-shifted
/// histograms this is the orientation reflection -phi relative to the anchor.
std::vector<double> mirror_about_anchor(std::span<const double> bins);

/// Sum of bin-wise minima. Throws on length mismatch.
double intersection(std::span<const double> a, std::span<const double> b);

}  // namespace symdet
