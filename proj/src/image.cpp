#include "symdet/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace symdet {

double luminance(const Rgb& c) noexcept { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

Hsv rgb_to_hsv(const Rgb& c) noexcept {
  const double mx = std::max({c.r, c.g, c.b});
  const double mn = std::min({c.r, c.g, c.b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) return out;  // achromatic: hue defined as 0

  double sector;  // hue in units of 60 degrees
  if (mx == c.r) {
    sector = std::fmod((c.g - c.b) / delta, 6.0);
  } else if (mx == c.g) {
    sector = (c.b - c.r) / delta + 2.0;
  } else {
    sector = (c.r - c.g) / delta + 4.0;
  }
  if (sector < 0.0) sector += 6.0;
  out.h = sector * (std::numbers::pi / 3.0);
  if (out.h >= 2.0 * std::numbers::pi) out.h = 0.0;
  return out;
}

Grid<double> to_grayscale(const ColorImage& image) {
  require(!image.pixels.empty(), "to_grayscale: empty image");
  Grid<double> gray(image.width(), image.height());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = luminance(image.pixels[i]);
  return gray;
}

Grid<Hsv> to_hsv(const ColorImage& image) {
  Grid<Hsv> hsv(image.width(), image.height());
  for (std::size_t i = 0; i < hsv.size(); ++i) hsv[i] = rgb_to_hsv(image.pixels[i]);
  return hsv;
}

double mean_saturation(const Grid<Hsv>& hsv) {
  if (hsv.empty()) return 0.0;
  double sum = 0.0;
  for (const Hsv& p : hsv) sum += p.s;
  return sum / static_cast<double>(hsv.size());
}

ColorImage image_from_u8(const unsigned char* data, int width, int height, int channels) {
  require(width > 0 && height > 0, "image dimensions must be positive");
  require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
  ColorImage image{Grid<Rgb>(width, height), channels == 1};
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const unsigned char* px = data + i * channels;
    if (channels == 1) {
      const double g = px[0] / 255.0;
      image.pixels[i] = {g, g, g};
    } else {
      image.pixels[i] = {px[0] / 255.0, px[1] / 255.0, px[2] / 255.0};
    }
  }
  return image;
}

}  // namespace symdet
