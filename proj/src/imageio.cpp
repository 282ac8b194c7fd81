#include "symdet/imageio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace symdet {

namespace {
const std::array<cv::Scalar, 5> kRankColors{
    cv::Scalar(0, 0, 255),    // red
    cv::Scalar(0, 255, 255),  // yellow
    cv::Scalar(0, 255, 0),    // green
    cv::Scalar(255, 0, 0),    // blue
    cv::Scalar(255, 0, 255),  // magenta
};

cv::Point to_pixel(const Point2& p) {
  return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}
}  // namespace

ColorImage load_image(const std::filesystem::path& path) {
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) fail(ErrorKind::io, "cannot read image " + path.string());
  if (raw.depth() != CV_8U) {
    cv::Mat scaled;
    raw.convertTo(scaled, CV_8U, raw.depth() == CV_16U ? 1.0 / 257.0 : 255.0);
    raw = scaled;
  }
  cv::Mat rgb;
  switch (raw.channels()) {
    case 1:
      if (!raw.isContinuous()) raw = raw.clone();
      return image_from_u8(raw.data, raw.cols, raw.rows, 1);
    case 3:
      cv::cvtColor(raw, rgb, cv::COLOR_BGR2RGB);
      break;
    case 4:
      cv::cvtColor(raw, rgb, cv::COLOR_BGRA2RGB);
      break;
    default:
      fail(ErrorKind::io, "unsupported channel count in " + path.string());
  }
  return image_from_u8(rgb.data, rgb.cols, rgb.rows, 3);
}

cv::Mat to_bgr8(const ColorImage& image) {
  cv::Mat out(image.height(), image.width(), CV_8UC3);
  auto u8 = [](double v) { return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const Rgb& p = image.pixels(x, y);
      out.at<cv::Vec3b>(y, x) = {u8(p.b), u8(p.g), u8(p.r)};
    }
  return out;
}

std::span<const cv::Scalar> rank_colors() noexcept { return kRankColors; }

cv::Mat render_overlay(const ColorImage& image, const DetectionRecord& record, int top_k) {
  cv::Mat canvas = to_bgr8(image);
  std::vector<const AxisSegment*> axes;
  for (const AxisSegment& a : record.axes) axes.push_back(&a);
  std::stable_sort(axes.begin(), axes.end(), [](const AxisSegment* a, const AxisSegment* b) {
    return a->score.value_or(0.0) > b->score.value_or(0.0);
  });
  if (top_k >= 0 && axes.size() > static_cast<std::size_t>(top_k)) axes.resize(top_k);

  const int thickness = std::max(1, static_cast<int>(std::lround(std::min(canvas.cols, canvas.rows) / 200.0)));
  const int half = thickness + 2;
  // Lowest rank first so the best axis ends up on top.
  for (std::size_t k = axes.size(); k-- > 0;) {
    const cv::Scalar color = kRankColors[k % kRankColors.size()];
    const cv::Point a = to_pixel(axes[k]->a);
    const cv::Point b = to_pixel(axes[k]->b);
    cv::line(canvas, a, b, color, thickness, cv::LINE_8);
    for (const cv::Point& p : {a, b})
      cv::rectangle(canvas, p - cv::Point(half, half), p + cv::Point(half, half), color,
                    cv::FILLED);
  }
  return canvas;
}

cv::Mat export_heatmap(const Grid<double>& smoothed) {
  require(!smoothed.empty(), "export_heatmap: empty histogram");
  const double top = *std::max_element(smoothed.begin(), smoothed.end());
  cv::Mat out(smoothed.height(), smoothed.width(), CV_8UC1, cv::Scalar(0));
  if (!(top > 0.0)) return out;
  for (int y = 0; y < smoothed.height(); ++y)
    for (int x = 0; x < smoothed.width(); ++x)
      out.at<unsigned char>(y, x) = static_cast<unsigned char>(
          std::lround(std::clamp(smoothed(x, y) / top, 0.0, 1.0) * 255.0));
  return out;
}

void write_image(const std::filesystem::path& path, const cv::Mat& image) {
  std::vector<unsigned char> bytes;
  std::string ext = path.extension().string();
  if (ext.empty()) ext = ".png";
  if (!cv::imencode(ext, image, bytes))
    fail(ErrorKind::io, "cannot encode image as " + ext + " for " + path.string());
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace symdet
