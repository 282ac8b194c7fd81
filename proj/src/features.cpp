#include "symdet/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symdet/detail/parallel.hpp"
#include "symdet/fft.hpp"

namespace symdet {

namespace {

using Complex = Fft2d::Complex;

// Magnitude of the inverse transform of spectrum * kernel(s, o). Both the
// materializing and the streaming paths go through here so they agree bit
// for bit.
void filtered_modulus(const std::vector<Complex>& spectrum, const FilterBank& bank, const Fft2d& fft,
                      int s, int o, std::vector<Complex>& scratch_in,
                      std::vector<Complex>& scratch_out, Grid<double>& out) {
  const Grid<double>& radial = bank.radial(s);
  const Grid<double>& angular = bank.angular(o);
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    scratch_in[i] = spectrum[i] * (radial[i] * angular[i]);
  fft.inverse(scratch_in, scratch_out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(scratch_out[i]);
}

void check_dimensions(const Grid<double>& gray, const FilterBank& bank) {
  if (gray.width() != bank.width() || gray.height() != bank.height())
    fail(ErrorKind::invalid_argument, "filter bank is " + std::to_string(bank.width()) + "x" +
                                          std::to_string(bank.height()) + " but image is " +
                                          std::to_string(gray.width()) + "x" +
                                          std::to_string(gray.height()));
}

struct Fold {
  Grid<double> value;
  Grid<int> index;

  Fold(int w, int h) : value(w, h, -1.0), index(w, h, -1) {}

  void add(const Grid<double>& response, int k) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (response[i] > value[i]) {
        value[i] = response[i];
        index[i] = k;
      }
    }
  }

  void merge(const Fold& other) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (other.value[i] > value[i] ||
          (other.value[i] == value[i] && other.index[i] >= 0 &&
           (index[i] < 0 || other.index[i] < index[i]))) {
        value[i] = other.value[i];
        index[i] = other.index[i];
      }
    }
  }
};

EdgeMaps finalize(const Fold& fold, const FilterBank& bank, double noise_floor) {
  const int w = fold.value.width();
  const int h = fold.value.height();
  EdgeMaps maps{Grid<double>(w, h), Grid<double>(w, h), Grid<int>(w, h, -1), false};
  double peak = 0.0;
  for (double v : fold.value) peak = std::max(peak, v);
  if (!(peak > noise_floor)) {
    maps.degenerate = true;
    return maps;
  }
  const int orientations = bank.orientations();
  for (std::size_t i = 0; i < maps.amplitude.size(); ++i) {
    maps.amplitude[i] = fold.value[i] / peak;
    maps.filter_index[i] = fold.index[i];
    maps.orientation[i] = wrap_half_turn(bank.orientation(fold.index[i] % orientations));
  }
  return maps;
}

}  // namespace

double wrap_half_turn(double angle) noexcept {
  constexpr double pi = std::numbers::pi;
  double a = std::fmod(angle + pi / 2.0, pi);
  if (a < 0.0) a += pi;
  a -= pi / 2.0;
  if (a >= pi / 2.0) a -= pi;
  return a;
}

ResponseStack apply_filter_bank(const Grid<double>& gray, const FilterBank& bank, int threads) {
  check_dimensions(gray, bank);
  const Fft2d fft(bank.width(), bank.height());
  const std::vector<Complex> spectrum = fft.forward(gray.values());
  const int count = bank.scales() * bank.orientations();
  ResponseStack stack{bank.scales(), bank.orientations(),
                      std::vector<Grid<double>>(count, Grid<double>(gray.width(), gray.height()))};
  detail::parallel_for(count, threads, [&](std::size_t k) {
    std::vector<Complex> a(fft.size()), b(fft.size());
    const int s = static_cast<int>(k) / bank.orientations();
    const int o = static_cast<int>(k) % bank.orientations();
    filtered_modulus(spectrum, bank, fft, s, o, a, b, stack.responses[k]);
  });
  return stack;
}

EdgeMaps edge_maps(const ResponseStack& stack, const FilterBank& bank) {
  require(!stack.responses.empty(), "edge_maps: empty response stack");
  require(stack.scales == bank.scales() && stack.orientations == bank.orientations(),
          "edge_maps: stack does not match filter bank");
  const Grid<double>& first = stack.responses.front();
  Fold fold(first.width(), first.height());
  for (std::size_t k = 0; k < stack.responses.size(); ++k)
    fold.add(stack.responses[k], static_cast<int>(k));
  return finalize(fold, bank, 0.0);
}

EdgeMaps compute_edge_maps(const Grid<double>& gray, const FilterBank& bank, int threads) {
  check_dimensions(gray, bank);
  const Fft2d fft(bank.width(), bank.height());
  const std::vector<Complex> spectrum = fft.forward(gray.values());
  const int count = bank.scales() * bank.orientations();
  const int workers = std::clamp(threads, 1, count);

  std::vector<Fold> folds(workers, Fold(gray.width(), gray.height()));
  detail::parallel_for(workers, workers, [&](std::size_t w) {
    std::vector<Complex> a(fft.size()), b(fft.size());
    Grid<double> response(gray.width(), gray.height());
    for (int k = static_cast<int>(w); k < count; k += workers) {
      filtered_modulus(spectrum, bank, fft, k / bank.orientations(), k % bank.orientations(), a, b,
                       response);
      folds[w].add(response, k);
    }
  });
  for (int w = 1; w < workers; ++w) folds[0].merge(folds[w]);

  double gray_scale = 0.0;
  for (double v : gray) gray_scale = std::max(gray_scale, std::abs(v));
  // Round-off leaves ~1e-16 relative residue on flat inputs.
  return finalize(folds[0], bank, 1e-10 * gray_scale);
}

int default_cell_size(int width, int height, int divisor) {
  require(divisor >= 1, "cell divisor must be >= 1");
  const double side = std::round(static_cast<double>(std::max(width, height)) / divisor);
  return std::max(2, static_cast<int>(side));
}

std::vector<FeaturePoint> sample_feature_points(const EdgeMaps& maps, const Grid<Hsv>& hsv,
                                                int cell_size, double homogeneity_threshold) {
  require(cell_size >= 2, "cell_size must be >= 2");
  const Grid<double>& amp = maps.amplitude;
  require(hsv.width() == amp.width() && hsv.height() == amp.height(),
          "sample_feature_points: HSV image does not match edge maps");
  std::vector<FeaturePoint> features;
  if (maps.degenerate) return features;

  const int cells_x = (amp.width() + cell_size - 1) / cell_size;
  const int cells_y = (amp.height() + cell_size - 1) / cell_size;
  for (int cy = 0; cy < cells_y; ++cy) {
    for (int cx = 0; cx < cells_x; ++cx) {
      const PixelRect cell{cx * cell_size, cy * cell_size,
                           std::min(amp.width(), (cx + 1) * cell_size),
                           std::min(amp.height(), (cy + 1) * cell_size)};
      int best_x = cell.x0, best_y = cell.y0;
      double best = -1.0;
      for (int y = cell.y0; y < cell.y1; ++y)
        for (int x = cell.x0; x < cell.x1; ++x)
          if (amp(x, y) > best) {
            best = amp(x, y);
            best_x = x;
            best_y = y;
          }
      if (best <= homogeneity_threshold) continue;
      features.push_back({best_x, best_y, best, maps.orientation(best_x, best_y),
                          hsv(best_x, best_y), cy * cells_x + cx, cell});
    }
  }
  return features;
}

}  // namespace symdet
