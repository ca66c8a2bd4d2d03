#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace anchortrack {

/// Every tunable of the tracker. The first five fields carry the published
/// values; the rest are engineering defaults.
struct TrackerConfig {
  double closeness_alpha = 0.005;  ///< per pixel, closeness slope
  double st_eta = 5000.0;          ///< square pixels, short-term scaling
  double lt_init_floor = 0.5;      ///< floor of the first-frame closeness
  double lt_delta = 0.1;           ///< long-term adaptation rate
  double lt_min = 0.1;             ///< anchors below this are pruned
  double ratio_test = 0.9;

  double vote_sigma_rel = 0.05;  ///< sigma as a fraction of sqrt(box area)
  double vote_sigma_min = 2.0;   ///< pixels
  double vote_truncation = 3.0;  ///< stamp radius in sigma units

  bool scale_enabled = true;
  int scale_period = 10;
  double scale_clamp = 0.10;

  double gate_lbsp_min = 0.75;
  double gate_hist_max = 0.30;
  int lbsp_threshold = 30;
  int hist_bins_per_channel = 8;
  int patch_norm_size = 32;

  int max_anchors = 400;
  int descriptor_patch = 11;
  double corner_min_response = 20.0;  ///< min-eigenvalue floor, (grey levels / px)^2

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// values and constraint violations raise ConfigError (with line number when
/// one applies). Keys that are absent keep their defaults.
TrackerConfig parse_config(std::string_view text, const std::string& source = "<config>");
TrackerConfig load_config(const std::filesystem::path& path);

/// Writes every field in the format parse_config accepts.
void write_config(std::ostream& os, const TrackerConfig& cfg);

}  // namespace anchortrack
