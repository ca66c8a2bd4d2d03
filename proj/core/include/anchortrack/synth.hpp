#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchortrack/eval.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/geometry.hpp"

namespace anchortrack {

/// Fully scripted synthetic sequence: every per-frame script has one entry
/// per frame. Translation and scale entries compound (frame t's center is the
/// start plus translations 0..t; its size is the base size times scales 0..t).
struct SynthSpec {
  int frame_width = 320;
  int frame_height = 240;
  double object_width = 64.0;
  double object_height = 64.0;
  Point2 start_center{160.0, 120.0};
  std::uint64_t seed = 1;
  int cell_size = 8;  ///< checker cell side of the object texture, object pixels

  std::vector<Point2> translation;
  std::vector<double> scale;
  std::vector<std::optional<BoundingBox>> occluder;
  std::vector<double> gain;

  double noise_sigma = 0.0;
  int blur_size = 0;  ///< odd box-blur side; 0 or 1 disables

  std::size_t frame_count() const { return translation.size(); }
  void validate() const;  ///< throws SpecInvalid
};

/// Compact description from which the scripts are derived; this is what
/// presets and spec files hold.
struct SynthParams {
  int frames = 100;
  int width = 320;
  int height = 240;
  double object_width = 64.0;
  double object_height = 64.0;
  double start_x = 160.0;
  double start_y = 120.0;
  std::uint64_t seed = 1;
  int cell_size = 8;
  double velocity_x = 0.0;
  double velocity_y = 0.0;
  bool bounce = false;  ///< reflect the velocity at the frame edges
  double scale_rate = 1.0;
  int occlude_from = -1;  ///< first occluded frame, -1 for none
  int occlude_to = -1;    ///< last occluded frame (inclusive)
  double occluder_margin = 16.0;
  double noise_sigma = 0.0;
  int blur = 0;
  double gain_start = 1.0;
  double gain_end = 1.0;
};

struct SynthSequence {
  std::vector<Frame> frames;
  GroundTruth truth;
};

SynthSpec make_spec(const SynthParams& params);
SynthSequence generate(const SynthSpec& spec);

/// translation, fast_motion, scale_ramp, occlusion, blur, gain_ramp.
/// Throws SpecInvalid for other names.
SynthParams preset(std::string_view name);
std::vector<std::string> preset_names();

/// `key = value` lines naming SynthParams fields; `#` comments.
SynthParams parse_synth_params(std::string_view text, const std::string& source = "<synth>");

}  // namespace anchortrack
