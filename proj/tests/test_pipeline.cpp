#include <opencv2/imgcodecs.hpp>

#include "doctest.h"
#include "symdet/imageio.hpp"
#include "symdet/pipeline.hpp"
#include "synthetic.hpp"

using namespace symdet;

namespace {
ColorImage flat_image(int w, int h, double v) {
  ColorImage img{Grid<Rgb>(w, h, Rgb{v, v, v}), false};
  return img;
}

Config small_config() {
  Config c;
  c.filters.scales = 6;
  c.filters.orientations = 16;
  c.deterministic = true;
  return c;
}
}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("homogeneous image has no features") {
    try {
      detect(flat_image(64, 48, 0.0), small_config());
      FAIL("expected no_features");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::no_features);
    }
    CHECK_THROWS_AS(detect(flat_image(64, 48, 0.7), small_config()), Error);
  }

  TEST_CASE("mirrored texture yields a near-vertical axis") {
    const auto c = testing::mirrored_texture(96, 96, 7);
    const Detection d = detect(c.image, small_config());
    REQUIRE_FALSE(d.axes.empty());
    CHECK(d.axes[0].score == 1.0);
    CHECK(is_true_positive({d.axes[0].a, d.axes[0].b, {}}, c.axis, Regime::cvpr2011, {96, 96}));
    for (std::size_t k = 1; k < d.axes.size(); ++k) CHECK(d.axes[k].score <= d.axes[k - 1].score);
    CHECK(d.smoothed.width() == rho_bin_count(96, 96));
    CHECK(d.smoothed.height() == 360);
  }

  TEST_CASE("feature cap keeps the strongest features in cell order") {
    std::vector<FeaturePoint> f(5);
    const double amps[] = {0.3, 0.9, 0.1, 0.9, 0.5};
    for (int i = 0; i < 5; ++i) {
      f[i].amplitude = amps[i];
      f[i].cell_id = i;
    }
    const auto kept = cap_features(f, 3);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].cell_id == 1);
    CHECK(kept[1].cell_id == 3);
    CHECK(kept[2].cell_id == 4);
    CHECK(cap_features(f, 0).size() == 5);
  }
}

TEST_SUITE("imageio") {
  TEST_CASE("overlay draws ranked axes") {
    const ColorImage img = flat_image(50, 40, 0.0);
    DetectionRecord none{"x", {}};
    const cv::Mat untouched = render_overlay(img, none);
    CHECK(cv::countNonZero(untouched.reshape(1)) == 0);

    DetectionRecord rec{"x", {{{25, 2}, {25, 37}, 1.0}, {{2, 20}, {47, 20}, 0.5}}};
    const cv::Mat one = render_overlay(img, rec, 1);
    CHECK(one.at<cv::Vec3b>(20, 25) == cv::Vec3b(0, 0, 255));
    CHECK(one.at<cv::Vec3b>(20, 10) == cv::Vec3b(0, 0, 0));
    const cv::Mat both = render_overlay(img, rec, 5);
    CHECK(both.at<cv::Vec3b>(20, 10) == cv::Vec3b(0, 255, 255));
    // The best axis is drawn last and stays on top at the crossing.
    CHECK(both.at<cv::Vec3b>(20, 25) == cv::Vec3b(0, 0, 255));
    CHECK(rank_colors().size() == 5);
  }

  TEST_CASE("heatmap export") {
    Grid<double> g(30, 360);
    g(4, 100) = 2.0;
    g(5, 100) = 1.0;
    const cv::Mat h = export_heatmap(g);
    CHECK(h.cols == 30);
    CHECK(h.rows == 360);
    CHECK(h.type() == CV_8UC1);
    CHECK(h.at<unsigned char>(100, 4) == 255);
    CHECK(h.at<unsigned char>(100, 5) == 128);
    CHECK(h.at<unsigned char>(0, 0) == 0);
    CHECK(cv::countNonZero(export_heatmap(Grid<double>(30, 360))) == 0);
    const cv::Mat uniform = export_heatmap(Grid<double>(8, 360, 0.3));
    CHECK(cv::countNonZero(uniform) == 8 * 360);
  }

  TEST_CASE("image round trip through disk") {
    const auto c = testing::mirrored_texture(40, 30, 1);
    const auto path = std::filesystem::temp_directory_path() / "symdet_test_roundtrip.png";
    write_image(path, to_bgr8(c.image));
    const ColorImage back = load_image(path);
    CHECK(back.pixels.width() == 40);
    CHECK(back.pixels.height() == 30);
    CHECK_FALSE(back.single_channel);
    CHECK(std::abs(back.pixels(3, 4).r - c.image.pixels(3, 4).r) <= 1.0 / 255 + 1e-12);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_image("/nonexistent/img.png"), Error);
  }
}
