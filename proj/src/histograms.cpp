#include "symdet/histograms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace symdet {

namespace {
constexpr double kPi = std::numbers::pi;

int clamp_bin(double scaled, int bins) noexcept {
  return std::clamp(static_cast<int>(std::floor(scaled)), 0, bins - 1);
}
}  // namespace

int orientation_bin(double phi, int bins) noexcept {
  double u = std::fmod(phi, kPi);
  if (u < 0.0) u += kPi;
  // Filter orientations land exactly on bin edges; absorb round-off so
  // z*pi/N always maps to bin z.
  const int n = static_cast<int>(std::floor(u * bins / kPi + 1e-9));
  return ((n % bins) + bins) % bins;
}

void l1_normalize(std::span<double> bins) noexcept {
  double total = 0.0;
  for (double b : bins) total += b;
  if (total <= 0.0) return;
  for (double& b : bins) b /= total;
}

std::vector<double> circular_shift(std::span<const double> bins, int shift) {
  const int n = static_cast<int>(bins.size());
  std::vector<double> out(bins.size());
  if (n == 0) return out;
  const int k = ((shift % n) + n) % n;
  for (int i = 0; i < n; ++i) out[i] = bins[(i + k) % n];
  return out;
}

TexturalHistogram textural_histogram(const PixelRect& cell, const Grid<double>& amplitude,
                                     const Grid<double>& orientation, int bins, double anchor) {
  require(bins >= 2, "textural histogram needs at least 2 bins");
  require(anchor >= -kPi / 2.0 && anchor < kPi / 2.0, "anchor must lie in [-pi/2, pi/2)");
  std::vector<double> raw(bins, 0.0);
  const int x0 = std::max(cell.x0, 0), y0 = std::max(cell.y0, 0);
  const int x1 = std::min(cell.x1, amplitude.width()), y1 = std::min(cell.y1, amplitude.height());
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) raw[orientation_bin(orientation(x, y), bins)] += amplitude(x, y);
  l1_normalize(raw);
  return {circular_shift(raw, orientation_bin(anchor, bins)), anchor};
}

ColorHistogram color_histogram(const PixelRect& window, const Grid<Hsv>& hsv,
                               const ColorLayout& layout) {
  require(layout.hue >= 1 && layout.saturation >= 1 && layout.value >= 1,
          "color layout components must be >= 1");
  ColorHistogram out{std::vector<double>(layout.size(), 0.0)};
  const int x0 = std::max(window.x0, 0), y0 = std::max(window.y0, 0);
  const int x1 = std::min(window.x1, hsv.width()), y1 = std::min(window.y1, hsv.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const Hsv& p = hsv(x, y);
      // Upper edge of the last saturation/value interval is closed.
      const int h = clamp_bin(p.h / (2.0 * kPi) * layout.hue, layout.hue);
      const int s = clamp_bin(p.s * layout.saturation, layout.saturation);
      const int v = clamp_bin(p.v * layout.value, layout.value);
      out.bins[layout.flat_index(h, s, v)] += 1.0;
    }
  }
  l1_normalize(out.bins);
  return out;
}

ColorHistogram grayscale_color_histogram(const PixelRect& window, const Grid<double>& gray,
                                         int bins) {
  require(bins >= 2, "grayscale histogram needs at least 2 bins");
  ColorHistogram out{std::vector<double>(bins, 0.0)};
  const int x0 = std::max(window.x0, 0), y0 = std::max(window.y0, 0);
  const int x1 = std::min(window.x1, gray.width()), y1 = std::min(window.y1, gray.height());
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) out.bins[clamp_bin(gray(x, y) * bins, bins)] += 1.0;
  l1_normalize(out.bins);
  return out;
}

PixelRect centered_window(int x, int y, int radius, int width, int height) noexcept {
  return {std::max(0, x - radius), std::max(0, y - radius), std::min(width, x + radius + 1),
          std::min(height, y + radius + 1)};
}

std::vector<double> reverse(std::span<const double> bins) {
  return std::vector<double>(bins.rbegin(), bins.rend());
}

TexturalHistogram reverse(const TexturalHistogram& h) { return {reverse(h.bins), h.anchor}; }

std::vector<double> mirror_about_anchor(std::span<const double> bins) {
  const std::size_t n = bins.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = bins[(n - i) % n];
  return out;
}

double intersection(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(ErrorKind::invalid_argument, "histogram intersection: length mismatch (" +
                                          std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::min(a[i], b[i]);
  return sum;
}

}  // namespace symdet
