#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <opencv2/core.hpp>

#include "symdet/grid.hpp"
#include "symdet/image.hpp"
#include "symdet/records.hpp"

namespace symdet {

/// Reads an 8-bit PNG/JPEG (gray, RGB or RGBA; alpha is dropped).
ColorImage load_image(const std::filesystem::path& path);

/// 8-bit BGR copy of an image, for drawing and encoding.
cv::Mat to_bgr8(const ColorImage& image);

/// Rank colors of drawn axes: red, yellow, green, blue, magenta (BGR).
std::span<const cv::Scalar> rank_colors() noexcept;

/// Draws the `top_k` highest-scoring axes as lines with square endpoint markers.
cv::Mat render_overlay(const ColorImage& image, const DetectionRecord& record, int top_k = 5);

/// Linear grayscale map of a (rho, theta) histogram: rho along x, theta along
/// y, value / max scaled to 0..255 (rounded). An all-zero input maps to black.
cv::Mat export_heatmap(const Grid<double>& smoothed);

/// Encodes by file extension and writes atomically.
void write_image(const std::filesystem::path& path, const cv::Mat& image);

}  // namespace symdet
