#include "symdet/records.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace symdet {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  if (sep == ' ') {
    std::istringstream in(line);
    std::string f;
    while (in >> f) fields.push_back(f);
  } else {
    std::string f;
    std::istringstream in(line);
    while (std::getline(in, f, sep)) {
      const auto a = f.find_first_not_of(" \t\r");
      const auto b = f.find_last_not_of(" \t\r");
      fields.push_back(a == std::string::npos ? std::string() : f.substr(a, b - a + 1));
    }
  }
  return fields;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

[[noreturn]] void malformed(const std::string& what, int line) {
  fail(ErrorKind::parse, what + " (line " + std::to_string(line) + ")");
}

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  return in;
}

// Appends to the record with the given id, creating it on first sight so
// records keep file order.
template <typename Record>
Record& record_for(std::vector<Record>& records, std::map<std::string, std::size_t>& index,
                   const std::string& id) {
  auto [it, inserted] = index.try_emplace(id, records.size());
  if (inserted) records.push_back(Record{id, {}});
  return records[it->second];
}

}  // namespace

DetectionRecord make_detection_record(std::string image_id, std::span<const SymmetryAxis> axes) {
  DetectionRecord record{std::move(image_id), {}};
  for (const SymmetryAxis& a : axes) record.axes.push_back({a.a, a.b, a.score});
  return record;
}

void write_detections(std::ostream& out, std::span<const DetectionRecord> records) {
  char buf[256];
  for (const DetectionRecord& r : records) {
    require(!r.image_id.empty() && r.image_id.find_first_of(" \t\r\n") == std::string::npos,
            "image id must be nonempty and free of whitespace: '" + r.image_id + "'");
    for (const AxisSegment& s : r.axes) {
      std::snprintf(buf, sizeof buf, " %.4f %.4f %.4f %.4f %.6f\n", s.a.x, s.a.y, s.b.x, s.b.y,
                    s.score.value_or(0.0));
      out << r.image_id << buf;
    }
  }
}

std::string format_detections(std::span<const DetectionRecord> records) {
  std::ostringstream out;
  write_detections(out, records);
  return out.str();
}

std::vector<DetectionRecord> read_detections(std::istream& in) {
  std::vector<DetectionRecord> records;
  std::map<std::string, std::size_t> index;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    const std::vector<std::string> f = split(line, ' ');
    if (f.size() != 6) malformed("detection line needs 6 fields", number);
    double v[5];
    for (int k = 0; k < 5; ++k)
      if (!parse_number(f[k + 1], v[k])) malformed("bad number '" + f[k + 1] + "'", number);
    record_for(records, index, f[0]).axes.push_back({{v[0], v[1]}, {v[2], v[3]}, v[4]});
  }
  return records;
}

std::vector<DetectionRecord> read_detections(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_detections(in);
}

GtDialect parse_dialect(std::string_view name) {
  if (name == "generic") return GtDialect::generic;
  if (name == "csv" || name == "ava") return GtDialect::csv;
  if (name == "matlab" || name == "psu" || name == "ny" || name == "nyu" || name == "iccv2017")
    return GtDialect::matlab;
  fail(ErrorKind::invalid_argument, "unknown groundtruth dialect '" + std::string(name) + "'");
}

std::vector<GroundTruthRecord> parse_groundtruth(std::istream& in, GtDialect dialect) {
  std::vector<GroundTruthRecord> records;
  std::map<std::string, std::size_t> index;
  const char sep = dialect == GtDialect::csv ? ',' : ' ';
  const double origin = dialect == GtDialect::matlab ? 1.0 : 0.0;
  std::string line;
  int number = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    const bool has_comma = line.find(',') != std::string::npos;
    if (has_comma != (dialect == GtDialect::csv))
      malformed("line does not match the declared groundtruth dialect (mixed dialects?)", number);
    const std::vector<std::string> f = split(line, sep);
    if (f.size() != 5) malformed("groundtruth line needs 5 fields", number);
    double v[4];
    bool numeric = true;
    for (int k = 0; k < 4; ++k) numeric = numeric && parse_number(f[k + 1], v[k]);
    if (!numeric) {
      if (dialect == GtDialect::csv && first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      malformed("bad coordinate", number);
    }
    first_data_line = false;
    AxisSegment seg{{v[0] - origin, v[1] - origin}, {v[2] - origin, v[3] - origin}, std::nullopt};
    if (!(seg.length() > 0.0)) malformed("degenerate groundtruth axis", number);
    record_for(records, index, f[0]).axes.push_back(seg);
  }
  return records;
}

std::vector<GroundTruthRecord> parse_groundtruth(const std::filesystem::path& path,
                                                 GtDialect dialect) {
  std::ifstream in = open_input(path);
  return parse_groundtruth(in, dialect);
}

std::map<std::string, ImageSize> read_image_sizes(std::istream& in) {
  std::map<std::string, ImageSize> sizes;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string id;
    ImageSize size;
    std::string extra;
    if (!(fields >> id >> size.width >> size.height) || (fields >> extra) || size.width <= 0 ||
        size.height <= 0)
      malformed("image size line needs `id width height`", number);
    sizes[id] = size;
  }
  return sizes;
}

std::map<std::string, ImageSize> read_image_sizes(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_image_sizes(in);
}

void write_image_sizes(std::ostream& out, const std::map<std::string, ImageSize>& sizes) {
  for (const auto& [id, s] : sizes) out << id << ' ' << s.width << ' ' << s.height << '\n';
}

std::vector<EvalItem> join_records(std::span<const DetectionRecord> detections,
                                   std::span<const GroundTruthRecord> groundtruth,
                                   const std::map<std::string, ImageSize>& sizes) {
  std::map<std::string, EvalItem> items;
  for (const GroundTruthRecord& g : groundtruth) {
    EvalItem& item = items[g.image_id];
    item.image_id = g.image_id;
    item.groundtruth.insert(item.groundtruth.end(), g.axes.begin(), g.axes.end());
  }
  for (const DetectionRecord& d : detections) {
    auto it = items.find(d.image_id);
    if (it == items.end())
      fail(ErrorKind::invalid_argument, "detections for '" + d.image_id + "' have no groundtruth");
    it->second.detections.insert(it->second.detections.end(), d.axes.begin(), d.axes.end());
  }
  std::vector<EvalItem> out;
  for (auto& [id, item] : items) {
    if (auto s = sizes.find(id); s != sizes.end()) item.size = s->second;
    out.push_back(std::move(item));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorKind::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot move " + tmp.string() + " to " + path.string());
}

}  // namespace symdet
