#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "symdet/eval.hpp"
#include "symdet/voting.hpp"

namespace symdet {

/// Detected axes of one image, as scored segments.
struct DetectionRecord {
  std::string image_id;
  std::vector<AxisSegment> axes;
};

struct GroundTruthRecord {
  std::string image_id;
  std::vector<AxisSegment> axes;
};

DetectionRecord make_detection_record(std::string image_id, std::span<const SymmetryAxis> axes);

/// One axis per line: `image_id a_x a_y b_x b_y score`, fixed-point decimals.
void write_detections(std::ostream& out, std::span<const DetectionRecord> records);
std::string format_detections(std::span<const DetectionRecord> records);
std::vector<DetectionRecord> read_detections(std::istream& in);
std::vector<DetectionRecord> read_detections(const std::filesystem::path& path);

/// Groundtruth line layouts.
///   generic: `image_id a_x a_y b_x b_y`, whitespace separated, 0-based pixels
///   csv:     `image_id,a_x,a_y,b_x,b_y`, optional header row (AVA-style tables)
///   matlab:  as generic but 1-based pixel coordinates, as exported from the
///            MATLAB groundtruth of the PSU, NY and ICCV2017 distributions
enum class GtDialect { generic, csv, matlab };

/// Accepts generic, csv, matlab and the dataset aliases ava, psu, ny/nyu, iccv2017.
GtDialect parse_dialect(std::string_view name);

std::vector<GroundTruthRecord> parse_groundtruth(std::istream& in, GtDialect dialect);
std::vector<GroundTruthRecord> parse_groundtruth(const std::filesystem::path& path,
                                                 GtDialect dialect);

/// `image_id width height` per line.
std::map<std::string, ImageSize> read_image_sizes(std::istream& in);
std::map<std::string, ImageSize> read_image_sizes(const std::filesystem::path& path);
void write_image_sizes(std::ostream& out, const std::map<std::string, ImageSize>& sizes);

/// Joins detections with groundtruth by image id, sorted by id. Every
/// detection id must have groundtruth; groundtruth without detections
/// contributes only false negatives.
std::vector<EvalItem> join_records(std::span<const DetectionRecord> detections,
                                   std::span<const GroundTruthRecord> groundtruth,
                                   const std::map<std::string, ImageSize>& sizes);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace symdet
