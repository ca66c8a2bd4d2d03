#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anchortrack/anchor_model.hpp"
#include "anchortrack/config.hpp"
#include "anchortrack/geometry.hpp"
#include "anchortrack/keypoints.hpp"

namespace anchortrack {

/// Per-pixel vote accumulator over the frame grid. Cell (x, y) holds the
/// score of the object center sitting at pixel coordinate (x, y).
class ScoreMatrix {
 public:
  ScoreMatrix(int width, int height)
      : width_(width), height_(height), values_(static_cast<std::size_t>(width) * height, 0.0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return values_[index(x, y)]; }
  double& at(int x, int y) { return values_[index(x, y)]; }
  std::span<const double> values() const { return values_; }
  bool all_zero() const;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  std::vector<double> values_;
};

struct VoteStamp {
  Point2 center;
  double weight = 0.0;
  double sigma = 2.0;
};

/// Adds weight * exp(-d^2 / (2 sigma^2)) to every cell within
/// truncation * sigma of the stamp center, clipped to the grid. The Gaussian
/// normalisation constant is omitted: all stamps share one sigma, so the
/// argmax is unaffected.
void stamp(ScoreMatrix& sm, const VoteStamp& v, double truncation);

/// Stamps one vote per match at keypoint position + constraint vector with
/// weight lt * st, and records each matched anchor's position and predicted
/// center. Anchors not in `matches` get matched = false.
ScoreMatrix accumulate(AnchorModel& model, std::span<const MatchPair> matches,
                       std::span<const Keypoint> frame_keypoints, int width, int height,
                       const TrackerConfig& cfg);

/// Cell with the highest score. Scores are compared after rounding to 1e-7;
/// ties go to the cell nearest `previous_center`, then to the first in row
/// order. Throws NoVotes when the matrix is all zero.
Point2 localize(const ScoreMatrix& sm, Point2 previous_center);

/// Max-normalised 8-bit rendering of the matrix (row-major, one byte per cell).
std::vector<std::uint8_t> heatmap(const ScoreMatrix& sm);

}  // namespace anchortrack
