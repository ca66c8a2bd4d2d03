#pragma once

#include <optional>
#include <span>
#include <vector>

#include "anchortrack/config.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/geometry.hpp"

namespace anchortrack {

/// Unit-L2 appearance vector of a keypoint.
using Descriptor = std::vector<float>;

struct Keypoint {
  Point2 position;
  double response = 0.0;
  Descriptor descriptor;
};

struct MatchPair {
  int model_index = 0;
  int frame_index = 0;
  double distance = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// Minimum-eigenvalue (Shi-Tomasi) corner response of the 3x3-windowed
/// structure tensor built from Sobel gradients. Gradients are in grey levels
/// per pixel, so the response is in (grey levels / px)^2. Pixels closer than
/// two pixels to the frame edge have response 0.
std::vector<float> corner_response(const Frame& frame);

/// Corners above cfg.corner_min_response after 3x3 non-maximum suppression,
/// refined to sub-pixel position, described, and truncated to the
/// cfg.max_anchors strongest. Sorted by descending response, ties by (y, x).
/// With a region, only corners whose pixel lies inside it are returned.
std::vector<Keypoint> detect(const Frame& frame, const std::optional<BoundingBox>& region,
                             const TrackerConfig& cfg);

/// Mean-subtracted, L2-normalised grey patch of side cfg.descriptor_patch
/// centred on the rounded position (shifted inwards when it would leave the
/// frame). A flat patch yields the uniform unit vector.
Descriptor describe(const Frame& frame, Point2 position, const TrackerConfig& cfg);

/// Nearest-neighbour matching under L2 with a ratio test in both directions;
/// a pair survives only when each side is the other's nearest surviving
/// neighbour. A single candidate has an infinite second-nearest distance.
/// Candidates are rejected when nearest > ratio * second-nearest, and when
/// both distances are zero (an exact tie). Output is sorted by model_index.
std::vector<MatchPair> match_descriptors(std::span<const Descriptor> model,
                                         std::span<const Descriptor> frame, double ratio);

}  // namespace anchortrack
