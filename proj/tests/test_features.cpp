#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "symdet/features.hpp"
#include "symdet/fft.hpp"
#include "synthetic.hpp"

using namespace symdet;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

FilterBankParams small_bank() {
  FilterBankParams p;
  p.scales = 4;
  p.orientations = 8;
  return p;
}

Grid<double> random_gray(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid<double> g(w, h);
  for (double& v : g) v = u(rng);
  return g;
}
}  // namespace

TEST_SUITE("features") {
  TEST_CASE("grayscale conversion") {
    CHECK(luminance({1, 1, 1}) == Approx(1.0).epsilon(1e-15));
    CHECK(luminance({0, 0, 0}) == 0.0);
    CHECK(luminance({1, 0, 0}) == 0.299);
    ColorImage img{Grid<Rgb>(2, 1), false};
    img.pixels(0, 0) = {0, 1, 0};
    CHECK(to_grayscale(img)(0, 0) == 0.587);
    CHECK_THROWS_AS(to_grayscale(ColorImage{}), Error);
  }

  TEST_CASE("hsv conversion") {
    const Hsv red = rgb_to_hsv({1, 0, 0});
    CHECK(red.h == 0.0);
    CHECK(red.s == 1.0);
    CHECK(red.v == 1.0);
    CHECK(rgb_to_hsv({0, 1, 0}).h == Approx(2 * kPi / 3));
    CHECK(rgb_to_hsv({0, 0, 1}).h == Approx(4 * kPi / 3));
    CHECK(rgb_to_hsv({1, 0, 1}).h == Approx(5 * kPi / 3));
    const Hsv gray = rgb_to_hsv({0.4, 0.4, 0.4});
    CHECK(gray.h == 0.0);
    CHECK(gray.s == 0.0);
    CHECK(gray.v == 0.4);
  }

  TEST_CASE("fft round trip") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      const int w = 17 + 6 * seed, h = 12 + 5 * seed;
      const Grid<double> g = random_gray(w, h, seed);
      const Fft2d fft(w, h);
      const std::vector<Fft2d::Complex> spec = fft.forward(g.values());
      std::vector<Fft2d::Complex> back(fft.size());
      fft.inverse(spec, back);
      double err = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < back.size(); ++i) {
        err += std::norm(back[i] - g[i]);
        norm += g[i] * g[i];
      }
      CHECK(std::sqrt(err / norm) < 1e-9);
    }
  }

  TEST_CASE("constant image has no response") {
    const FilterBank bank(24, 20, small_bank());
    const ResponseStack stack = apply_filter_bank(Grid<double>(24, 20, 0.7), bank);
    CHECK(stack.responses.size() == 32);
    for (const Grid<double>& r : stack.responses)
      for (double v : r) CHECK(v <= 1e-10);
    CHECK(compute_edge_maps(Grid<double>(24, 20, 0.7), bank).degenerate);
  }

  TEST_CASE("responses are linear in the input") {
    const FilterBank bank(20, 16, small_bank());
    const Grid<double> g = random_gray(20, 16, 11);
    Grid<double> g2 = g;
    for (double& v : g2) v *= 2.0;
    const ResponseStack a = apply_filter_bank(g, bank);
    const ResponseStack b = apply_filter_bank(g2, bank);
    for (std::size_t k = 0; k < a.responses.size(); ++k)
      for (std::size_t i = 0; i < a.responses[k].size(); ++i)
        CHECK(b.responses[k][i] == Approx(2.0 * a.responses[k][i]).epsilon(1e-9));
  }

  TEST_CASE("sinusoid at the finest wavelength selects scale 0, orientation 0") {
    // Wave vector along +x at 1/3 cycles per pixel.
    const FilterBank bank(48, 32, small_bank());
    Grid<double> g(48, 32);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 48; ++x) g(x, y) = std::sin(2 * kPi * x / 3.0);
    const ResponseStack stack = apply_filter_bank(g, bank);
    int best = -1;
    double best_mean = -1.0;
    for (std::size_t k = 0; k < stack.responses.size(); ++k) {
      double mean = 0.0;
      for (double v : stack.responses[k]) mean += v;
      if (mean > best_mean) {
        best_mean = mean;
        best = static_cast<int>(k);
      }
    }
    CHECK(best == 0);
  }

  TEST_CASE("edge maps from a single response value") {
    FilterBankParams p = small_bank();
    const FilterBank bank(8, 8, p);
    ResponseStack stack{4, 8, std::vector<Grid<double>>(32, Grid<double>(8, 8))};
    stack.responses[2 * 8 + 3](5, 6) = 0.37;  // s = 2, o = 3
    const EdgeMaps maps = edge_maps(stack, bank);
    CHECK_FALSE(maps.degenerate);
    CHECK(maps.amplitude(5, 6) == 1.0);
    CHECK(maps.amplitude(0, 0) == 0.0);
    CHECK(maps.orientation(5, 6) == Approx(3 * kPi / 8));
    CHECK(maps.filter_index(5, 6) == 19);

    ResponseStack wrapped{4, 8, std::vector<Grid<double>>(32, Grid<double>(8, 8))};
    wrapped.responses[6](1, 1) = 1.0;  // o = 6 -> 6pi/8 wraps to -pi/4
    CHECK(edge_maps(wrapped, bank).orientation(1, 1) == Approx(-kPi / 4));

    const ResponseStack zeros{4, 8, std::vector<Grid<double>>(32, Grid<double>(8, 8))};
    const EdgeMaps degenerate = edge_maps(zeros, bank);
    CHECK(degenerate.degenerate);
    for (double v : degenerate.amplitude) CHECK(v == 0.0);
    for (double v : degenerate.orientation) CHECK(v == 0.0);
  }

  TEST_CASE("vertical step edge has orientation 0 along the edge") {
    const FilterBank bank(64, 64, FilterBankParams{});
    Grid<double> g(64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 32; x < 64; ++x) g(x, y) = 1.0;
    const EdgeMaps maps = compute_edge_maps(g, bank);
    for (int y = 8; y < 56; ++y) {
      CHECK(maps.orientation(31, y) == 0.0);
      CHECK(maps.orientation(32, y) == 0.0);
      CHECK(maps.amplitude(31, y) > 0.5);
    }
  }

  TEST_CASE("streaming edge maps match the materialized stack") {
    const FilterBank bank(30, 22, small_bank());
    const Grid<double> g = random_gray(30, 22, 3);
    const EdgeMaps full = edge_maps(apply_filter_bank(g, bank), bank);
    for (int threads : {1, 3}) {
      const EdgeMaps streamed = compute_edge_maps(g, bank, threads);
      CHECK(streamed.amplitude == full.amplitude);
      CHECK(streamed.orientation == full.orientation);
      CHECK(streamed.filter_index == full.filter_index);
    }
    double top = 0.0;
    for (double v : full.amplitude) top = std::max(top, v);
    CHECK(top == 1.0);
  }

  TEST_CASE("wrap_half_turn") {
    CHECK(wrap_half_turn(0.0) == 0.0);
    CHECK(wrap_half_turn(kPi / 2) == Approx(-kPi / 2));
    CHECK(wrap_half_turn(kPi / 4) == Approx(kPi / 4));
    CHECK(wrap_half_turn(3 * kPi / 4) == Approx(-kPi / 4));
  }

  TEST_CASE("feature sampling") {
    Grid<Hsv> hsv(32, 32);
    SUBCASE("black image yields nothing") {
      const FilterBank bank(32, 32, small_bank());
      const EdgeMaps maps = compute_edge_maps(Grid<double>(32, 32), bank);
      CHECK(sample_feature_points(maps, hsv, 8, 0.05).empty());
    }
    SUBCASE("single bright dot") {
      EdgeMaps maps{Grid<double>(32, 32), Grid<double>(32, 32), Grid<int>(32, 32), false};
      maps.amplitude(10, 10) = 1.0;
      maps.orientation(10, 10) = 0.25;
      hsv(10, 10) = {1.0, 0.5, 0.75};
      const auto f = sample_feature_points(maps, hsv, 8, 0.05);
      REQUIRE(f.size() == 1);
      CHECK(f[0].x == 10);
      CHECK(f[0].y == 10);
      CHECK(f[0].orientation == 0.25);
      CHECK(f[0].color.v == 0.75);
      CHECK(f[0].cell_id == 1 * 4 + 1);
    }
    SUBCASE("cell bound and per-cell invariants") {
      const Grid<double> amp = random_gray(256, 256, 5);
      EdgeMaps maps{amp, Grid<double>(256, 256), Grid<int>(256, 256), false};
      const int cell = default_cell_size(256, 256);
      CHECK(cell == 4);
      const auto f = sample_feature_points(maps, Grid<Hsv>(256, 256), cell, 0.05);
      CHECK(f.size() <= 64u * 64u);
      std::set<int> ids;
      for (const FeaturePoint& p : f) {
        CHECK(ids.insert(p.cell_id).second);
        CHECK(p.cell.contains(p.x, p.y));
        for (int y = p.cell.y0; y < p.cell.y1; ++y)
          for (int x = p.cell.x0; x < p.cell.x1; ++x) CHECK(amp(x, y) <= p.amplitude);
      }
    }
    CHECK_THROWS_AS(sample_feature_points(EdgeMaps{}, Grid<Hsv>(), 1, 0.05), Error);
  }

  TEST_CASE("default cell size") {
    CHECK(default_cell_size(640, 480) == 10);
    CHECK(default_cell_size(50, 40) == 2);
    CHECK(default_cell_size(300, 100, 100) == 3);
  }

  TEST_CASE("feature positions ignore a constant offset") {
    const ColorImage img = testing::random_texture(64, 64, 9);
    Grid<double> gray = to_grayscale(img);
    const Grid<Hsv> hsv = to_hsv(img);
    const FilterBank bank(64, 64, FilterBankParams{});
    const auto a = sample_feature_points(compute_edge_maps(gray, bank), hsv, 4, 0.05);
    for (double& v : gray) v += 0.3;
    const auto b = sample_feature_points(compute_edge_maps(gray, bank), hsv, 4, 0.05);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
      CHECK(a[i].amplitude == Approx(b[i].amplitude).epsilon(1e-6));
    }
  }
}
