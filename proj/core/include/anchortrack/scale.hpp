#pragma once

#include <optional>
#include <span>

#include "anchortrack/config.hpp"
#include "anchortrack/geometry.hpp"

namespace anchortrack {

struct ScaleState {
  double accumulator = 1.0;  ///< product of per-frame ratios since the last period end
  int frames_since_apply = 0;
  double width_at_last_apply = 0.0;
  double height_at_last_apply = 0.0;
};

struct ScaleStep {
  BoundingBox box;
  double applied = 1.0;  ///< factor applied this call, 1.0 when none
};

/// Mean ratio of current to previous distances between the most consistent
/// anchor and every other anchor at or above the median lt. Inputs are
/// index-aligned over anchors observed in both frames. Absent when fewer than
/// three anchors qualify or every previous-frame pair is closer than 1 px.
std::optional<double> frame_ratio(std::span<const Point2> prev_positions,
                                  std::span<const Point2> curr_positions,
                                  std::span<const double> lt_values);

/// Folds `ratio` into the accumulator and, every cfg.scale_period calls,
/// applies it to the box when it lies within 1 +/- cfg.scale_clamp. The
/// accumulator and counter reset at every period end.
ScaleStep maybe_apply(ScaleState& state, std::optional<double> ratio, const BoundingBox& box,
                      const TrackerConfig& cfg);

}  // namespace anchortrack
