#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "anchortrack/config.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/geometry.hpp"
#include "anchortrack/keypoints.hpp"

namespace anchortrack {

/// A keypoint descriptor tied to the object center by a constraint vector,
/// weighted by its long-term and short-term consistencies.
struct AnchorPoint {
  std::uint64_t id = 0;
  Descriptor descriptor;
  Point2 constraint;  ///< object center minus keypoint position at enrolment
  double lt = 0.0;    ///< long-term consistency, [0, 1]
  double st = 1.0;    ///< short-term consistency, (0, 1]

  // Per-frame observation, valid only while `matched` is set.
  bool matched = false;
  Point2 position;          ///< matched keypoint position in the current frame
  Point2 predicted_center;  ///< position + constraint
  double closeness = 0.0;

  // Last frame the anchor was observed in (matched or enrolled), for the
  // scale estimator's consecutive-frame pairs.
  std::int64_t last_seen = -1;
  Point2 last_position;
};

struct AnchorModel {
  std::vector<AnchorPoint> anchors;
  BoundingBox box;
  double vote_sigma = 2.0;
  std::uint64_t next_id = 0;

  Point2 center() const { return box.center; }
  std::vector<Descriptor> descriptors() const;
};

/// max(1 - alpha * |L0|, lt_init_floor)
double init_closeness(Point2 constraint, const TrackerConfig& cfg);

/// max(1 - alpha * |final - predicted|, 0)
double compute_closeness(Point2 predicted, Point2 final_center, const TrackerConfig& cfg);

/// exp(-|predicted - final|^2 / eta)
double update_short_term(Point2 predicted, Point2 final_center, const TrackerConfig& cfg);

/// Matched: (1 - delta) lt + delta closeness. Unmatched: (1 - delta) lt.
double adapt_long_term(const AnchorPoint& anchor, const TrackerConfig& cfg);

/// Isotropic vote spread for a box: max(vote_sigma_min, vote_sigma_rel * sqrt(area)).
double vote_sigma(const BoundingBox& box, const TrackerConfig& cfg);

/// Enrols every keypoint detected inside `box`. Throws InitializationFailure
/// when there is none.
AnchorModel build(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg);

/// Drops anchors with lt < lt_min, always keeping at least the strongest one.
void prune(AnchorModel& model, const TrackerConfig& cfg);

/// Enrols keypoints detected inside `box` that are not within 2 px of an
/// anchor matched in this frame. When the model is full, a candidate evicts
/// the weakest anchor if its own lt is higher. Returns the number enrolled.
int add_anchors(AnchorModel& model, const Frame& frame, const BoundingBox& box,
                const TrackerConfig& cfg);

/// Multiplies every constraint vector by s (> 0).
void rescale_vectors(AnchorModel& model, double s);

/// One line per anchor: Lx, Ly, lt, st, matched (tab separated).
void write_model_dump(std::ostream& os, const AnchorModel& model);

}  // namespace anchortrack
