#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symdet/filterbank.hpp"

using namespace symdet;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("filterbank") {
  TEST_CASE("frequency grid layout") {
    const FrequencyGrid g = build_frequency_grid(4, 4);
    CHECK(g.eta(0, 0) == 0.0);
    // Index 2 of a length-4 axis is the Nyquist sample, f = -0.5.
    CHECK(g.eta(2, 2) == Approx(std::sqrt(0.5)).epsilon(1e-12));

    const FrequencyGrid h = build_frequency_grid(8, 6);
    CHECK(h.alpha(1, 0) == 0.0);
    CHECK(h.alpha(0, 1) == Approx(kPi / 2));
    CHECK(FrequencyGrid::axis_frequency(7, 8) == Approx(-1.0 / 8));

    for (double v : h.eta) {
      CHECK(v >= 0.0);
      CHECK(v <= std::sqrt(0.5) + 1e-12);
    }
  }

  TEST_CASE("frequency grid rejects tiny sizes") {
    CHECK_THROWS_AS(build_frequency_grid(1, 4), Error);
    CHECK_THROWS_AS(build_frequency_grid(4, 0), Error);
  }

  TEST_CASE("butterworth values") {
    const Butterworth u{0.45, 15};
    CHECK(butterworth_value(0.0, u) == 1.0);
    CHECK(butterworth_value(0.45, u) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(butterworth_value(0.9, u) == Approx(1.0 / std::sqrt(1.0 + std::pow(2.0, 30))).epsilon(1e-9));
    CHECK(butterworth_value(0.9, u) == Approx(3.05e-5).epsilon(1e-2));
  }

  TEST_CASE("radial component") {
    const FrequencyGrid g = build_frequency_grid(64, 64);
    // eta = 0.1 lies on the grid at index (6.4...) only approximately, so
    // check the analytic formula through a single-sample grid value.
    const Grid<double> r = radial_component(g, 0.25, 0.55);
    CHECK(r(0, 0) == 0.0);
    // (16, 0) has eta = 0.25 exactly: Gaussian peak times Butterworth.
    CHECK(r(16, 0) == Approx(butterworth_value(0.25, {})).epsilon(1e-12));

    const Grid<double> at_cutoff = radial_component(build_frequency_grid(20, 20), 0.45, 0.55);
    CHECK(at_cutoff(9, 0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));  // eta = 0.45

    CHECK_THROWS_AS(radial_component(g, 0.5, 0.55), Error);
    CHECK_THROWS_AS(radial_component(g, 0.0, 0.55), Error);
  }

  TEST_CASE("radial peak value near eta_s is 1 times butterworth") {
    const FrequencyGrid g = build_frequency_grid(10, 10);
    const Grid<double> r = radial_component(g, 0.1, 0.55);
    CHECK(r(1, 0) == Approx(1.0 / std::sqrt(1.0 + std::pow(0.1 / 0.45, 30))).epsilon(1e-12));
    CHECK(r(1, 0) == Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("angular component") {
    CHECK(angular_value(0.3, 0.3, 0.2) == 1.0);
    CHECK(angular_value(kPi, 0.0, 0.2) == Approx(std::exp(-kPi / 0.08)).epsilon(1e-9));
    CHECK(angular_value(kPi, 0.0, 0.2) == Approx(9.0e-18).epsilon(0.02));
    CHECK(angular_value(3 * kPi / 2, 0.0, 0.2) == Approx(angular_value(kPi / 2, 0.0, 0.2)).epsilon(1e-12));
    CHECK(angular_value(0.5, 0.0, 0.3, AngularExponent::squared) ==
          Approx(std::exp(-0.25 / 0.18)).epsilon(1e-12));
    for (double d = 0.05; d < kPi; d += 0.1)
      CHECK(angular_value(1.0 + d, 1.0, 0.2) == Approx(angular_value(1.0 - d, 1.0, 0.2)).epsilon(1e-12));
  }

  TEST_CASE("single kernel peaks on the alpha = 0 ridge near eta_s") {
    FilterBankParams p;
    p.scales = 1;
    p.orientations = 1;
    p.min_wavelength = 4.0;
    const FilterBank bank(64, 64, p);
    const Grid<double> k = bank.kernel(0, 0);
    int bx = 0, by = 0;
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x)
        if (k(x, y) > k(bx, by)) {
          bx = x;
          by = y;
        }
    CHECK(by == 0);
    CHECK(bank.grid().alpha(bx, by) == 0.0);
    CHECK(std::abs(bank.grid().eta(bx, by) - 0.25) <= 1.0 / 64);
    CHECK(bx == 16);
  }

  TEST_CASE("filter bank parameters") {
    const FilterBank bank(32, 24);
    CHECK(bank.scales() == 12);
    CHECK(bank.orientations() == 32);
    CHECK(bank.center_frequency(0) == Approx(1.0 / 3.0));
    CHECK(bank.center_frequency(1) == Approx(1.0 / 3.0 / 1.45));
    CHECK(bank.orientation(5) == Approx(5 * kPi / 32));

    FilterBankParams aliasing;
    aliasing.min_wavelength = 2.0;
    CHECK_THROWS_AS(FilterBank(16, 16, aliasing), Error);
    FilterBankParams bad;
    bad.scale_multiplier = 1.0;
    CHECK_THROWS_AS(FilterBank(16, 16, bad), Error);
  }

  TEST_CASE("kernels are deterministic and bounded") {
    FilterBankParams p;
    p.scales = 3;
    p.orientations = 4;
    const FilterBank a(20, 18, p), b(20, 18, p);
    for (int s = 0; s < 3; ++s)
      for (int o = 0; o < 4; ++o) {
        const Grid<double> ka = a.kernel(s, o);
        CHECK(ka == b.kernel(s, o));
        CHECK(ka(0, 0) == 0.0);
        for (double v : ka) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
  }
}
