#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symdet/filterbank.hpp"
#include "symdet/histograms.hpp"
#include "symdet/voting.hpp"

namespace symdet {

/// Every tunable of the detection pipeline.
struct Config {
  FilterBankParams filters{};
  int texture_bins = 32;
  ColorLayout color_layout{8, 2, 2};
  int cell_divisor = 64;
  double homogeneity_threshold = 0.05;
  double grayscale_saturation = 0.05;  // mean saturation below this uses luminance histograms
  int theta_bins = 360;
  double smoothing_sigma_rho = 2.0;
  double smoothing_sigma_theta = 2.0;
  NmsWindow nms{11, 11};
  int max_peaks = 10;
  int max_features = 0;  // 0 keeps every feature
  TextureMirror texture_mirror = TextureMirror::anchor;
  bool deterministic = false;
  int threads = 0;  // 0 = hardware concurrency

  /// Worker count after applying `deterministic` and the auto setting.
  int effective_threads() const noexcept;

  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// key = value lines in canonical key order.
  std::string to_text() const;
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

/// All recognized keys, in canonical order.
const std::vector<ConfigKey>& config_keys();

void validate(const Config& config);

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
Config parse_config(std::string_view text, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

/// Environment variable naming a default config file for the CLI.
inline constexpr const char* kConfigEnvVar = "SYMDET_CONFIG";

}  // namespace symdet
