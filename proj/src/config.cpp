#include "symdet/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace symdet {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorKind::invalid_argument,
       "invalid value '" + std::string(value) + "' for config key '" + std::string(key) + "'");
}

int to_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  // from_chars for double is not available in libstdc++ 11.
  const std::string s(value);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) bad_value(key, value);
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int precision = 1; precision <= 17; ++precision) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

struct Entry {
  ConfigKey key;
  std::function<void(Config&, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

template <typename Field>
Entry int_entry(std::string_view name, std::string_view help, Field field) {
  return {{name, help},
          [name, field](Config& c, std::string_view v) { field(c) = to_int(name, v); },
          [field](Config c) { return std::to_string(field(c)); }};
}

template <typename Field>
Entry double_entry(std::string_view name, std::string_view help, Field field) {
  return {{name, help},
          [name, field](Config& c, std::string_view v) { field(c) = to_double(name, v); },
          [field](Config c) { return format_double(field(c)); }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      int_entry("scales", "number of log-Gabor scales",
                [](Config& c) -> int& { return c.filters.scales; }),
      int_entry("orientations", "number of log-Gabor orientations",
                [](Config& c) -> int& { return c.filters.orientations; }),
      double_entry("sigma_eta", "radial bandwidth ratio",
                   [](Config& c) -> double& { return c.filters.sigma_eta; }),
      double_entry("sigma_alpha", "angular bandwidth (radians)",
                   [](Config& c) -> double& { return c.filters.sigma_alpha; }),
      double_entry("min_wavelength", "wavelength of the finest scale (pixels)",
                   [](Config& c) -> double& { return c.filters.min_wavelength; }),
      double_entry("scale_multiplier", "wavelength ratio between successive scales",
                   [](Config& c) -> double& { return c.filters.scale_multiplier; }),
      double_entry("butterworth_cutoff", "low-pass cutoff (normalized frequency)",
                   [](Config& c) -> double& { return c.filters.lowpass.cutoff; }),
      int_entry("butterworth_order", "low-pass order",
                [](Config& c) -> int& { return c.filters.lowpass.order; }),
      {{"angular_exponent", "linear | squared angular distance in the angular factor"},
       [](Config& c, std::string_view v) {
         if (v == "linear")
           c.filters.angular_exponent = AngularExponent::linear;
         else if (v == "squared")
           c.filters.angular_exponent = AngularExponent::squared;
         else
           bad_value("angular_exponent", v);
       },
       [](const Config& c) {
         return std::string(c.filters.angular_exponent == AngularExponent::linear ? "linear"
                                                                                   : "squared");
       }},
      int_entry("texture_bins", "orientation bins of the textural histogram",
                [](Config& c) -> int& { return c.texture_bins; }),
      {{"color_layout", "hue:saturation:value bins of the color histogram"},
       [](Config& c, std::string_view v) {
         const std::string s(v);
         int h = 0, sa = 0, va = 0;
         char tail = 0;
         if (std::sscanf(s.c_str(), "%d:%d:%d%c", &h, &sa, &va, &tail) != 3)
           bad_value("color_layout", v);
         c.color_layout = {h, sa, va};
       },
       [](const Config& c) {
         return std::to_string(c.color_layout.hue) + ":" + std::to_string(c.color_layout.saturation) +
                ":" + std::to_string(c.color_layout.value);
       }},
      int_entry("cell_divisor", "cell size = max(2, round(max(W, H) / divisor))",
                [](Config& c) -> int& { return c.cell_divisor; }),
      double_entry("homogeneity_threshold", "minimum normalized amplitude for a feature cell",
                   [](Config& c) -> double& { return c.homogeneity_threshold; }),
      double_entry("grayscale_saturation", "mean saturation below which luminance is used",
                   [](Config& c) -> double& { return c.grayscale_saturation; }),
      int_entry("theta_bins", "orientation bins of the vote histogram",
                [](Config& c) -> int& { return c.theta_bins; }),
      double_entry("smoothing_sigma_rho", "Gaussian sigma along rho (bins)",
                   [](Config& c) -> double& { return c.smoothing_sigma_rho; }),
      double_entry("smoothing_sigma_theta", "Gaussian sigma along theta (bins)",
                   [](Config& c) -> double& { return c.smoothing_sigma_theta; }),
      int_entry("nms_rho", "NMS window extent along rho (bins)",
                [](Config& c) -> int& { return c.nms.rho; }),
      int_entry("nms_theta", "NMS window extent along theta (bins)",
                [](Config& c) -> int& { return c.nms.theta; }),
      int_entry("max_peaks", "maximum number of reported axes",
                [](Config& c) -> int& { return c.max_peaks; }),
      int_entry("max_features", "keep at most this many highest-amplitude features (0 = all)",
                [](Config& c) -> int& { return c.max_features; }),
      {{"texture_mirror", "anchor | index mirroring of the partner textural histogram"},
       [](Config& c, std::string_view v) {
         if (v == "anchor")
           c.texture_mirror = TextureMirror::anchor;
         else if (v == "index")
           c.texture_mirror = TextureMirror::index;
         else
           bad_value("texture_mirror", v);
       },
       [](const Config& c) {
         return std::string(c.texture_mirror == TextureMirror::anchor ? "anchor" : "index");
       }},
      {{"deterministic", "single-threaded, bit-reproducible run"},
       [](Config& c, std::string_view v) { c.deterministic = to_bool("deterministic", v); },
       [](const Config& c) { return std::string(c.deterministic ? "true" : "false"); }},
      int_entry("threads", "worker threads (0 = hardware concurrency)",
                [](Config& c) -> int& { return c.threads; }),
  };
  return table;
}

const Entry& find_entry(std::string_view key) {
  for (const Entry& e : entries())
    if (e.key.name == key) return e;
  fail(ErrorKind::invalid_argument, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

int Config::effective_threads() const noexcept {
  if (deterministic) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void Config::set(std::string_view key, std::string_view value) {
  find_entry(key).set(*this, trim(value));
}

std::string Config::get(std::string_view key) const { return find_entry(key).get(*this); }

std::string Config::to_text() const {
  std::string out;
  for (const Entry& e : entries()) {
    out += e.key.name;
    out += " = ";
    out += e.get(*this);
    out += '\n';
  }
  return out;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const Entry& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void validate(const Config& c) {
  validate(c.filters);
  require(c.texture_bins >= 2, "texture_bins must be >= 2");
  require(c.color_layout.hue >= 1 && c.color_layout.saturation >= 1 && c.color_layout.value >= 1,
          "color_layout components must be >= 1");
  require(c.color_layout.size() >= 2, "color_layout must have at least 2 bins");
  require(c.cell_divisor >= 1, "cell_divisor must be >= 1");
  require(c.homogeneity_threshold >= 0.0 && c.homogeneity_threshold < 1.0,
          "homogeneity_threshold must lie in [0, 1)");
  require(c.grayscale_saturation >= 0.0, "grayscale_saturation must be >= 0");
  require(c.theta_bins >= 1, "theta_bins must be >= 1");
  require(c.smoothing_sigma_rho > 0.0 && c.smoothing_sigma_theta > 0.0,
          "smoothing sigmas must be positive");
  require(c.nms.rho >= 1 && c.nms.theta >= 1, "NMS window must be at least 1x1");
  require(c.max_peaks >= 1, "max_peaks must be >= 1");
  require(c.max_features >= 0 && c.max_features <= 65535, "max_features must lie in [0, 65535]");
  require(c.threads >= 0, "threads must be >= 0");
}

Config parse_config(std::string_view text, Config base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::parse, "config line " + std::to_string(number) + ": expected key = value");
    try {
      base.set(trim(std::string_view(body).substr(0, eq)),
               trim(std::string_view(body).substr(eq + 1)));
    } catch (const Error& e) {
      fail(ErrorKind::parse, "config line " + std::to_string(number) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

}  // namespace symdet
