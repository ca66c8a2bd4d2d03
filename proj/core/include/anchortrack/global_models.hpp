#pragma once

#include <cstdint>
#include <vector>

#include "anchortrack/config.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/geometry.hpp"

namespace anchortrack {

/// Local binary similarity pattern codes of a size-normalised patch. Each
/// interior pixel compares itself against the 16 outer-ring cells of its 5x5
/// neighbourhood; bit k is set when the k-th ring cell (row-major) differs by
/// at most the threshold. Pixels within 2 of the edge hold 0.
struct LbspGrid {
  int size = 0;
  std::vector<std::uint16_t> codes;

  std::uint16_t at(int x, int y) const { return codes[static_cast<std::size_t>(y) * size + x]; }
  std::uint16_t& at(int x, int y) { return codes[static_cast<std::size_t>(y) * size + x]; }
  int interior_count() const { return (size - 4) * (size - 4); }
};

/// Center-weighted RGB histogram, L1-normalised.
struct WeightedHistogram {
  int bins_per_channel = 0;
  std::vector<double> bins;
};

/// First-frame appearance of the target; never modified afterwards.
struct ReferenceModels {
  LbspGrid lbsp;
  WeightedHistogram hist;
};

struct GateReading {
  double lbsp_similarity = 0.0;
  double hist_distance = 0.0;
  bool passed = false;
};

/// Bilinear resize of the box contents to n x n. Samples outside the frame are
/// clamped to the border. `channels` selects grey (1) or RGB (3).
std::vector<std::uint8_t> normalized_patch(const Frame& frame, const BoundingBox& box, int n,
                                           int channels);

LbspGrid lbsp_from_patch(const std::vector<std::uint8_t>& gray, int n, int threshold);
LbspGrid compute_lbsp(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg);

/// 1 - differing bits / (16 * interior pixels). Throws SizeMismatch.
double lbsp_similarity(const LbspGrid& a, const LbspGrid& b);

/// Each pixel weighs max(0, 1 - r^2) with r its distance to the patch center
/// over the half diagonal; channels are quantised into equal bins.
WeightedHistogram hist_from_patch(const std::vector<std::uint8_t>& rgb, int n, int bins_per_channel);
WeightedHistogram compute_weighted_hist(const Frame& frame, const BoundingBox& box,
                                        const TrackerConfig& cfg);

/// L2 distance between bin vectors. Throws SizeMismatch.
double hist_distance(const WeightedHistogram& a, const WeightedHistogram& b);

ReferenceModels build_references(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg);

/// Both comparisons against the references, inclusive at the thresholds.
GateReading evaluate_gate(const Frame& frame, const BoundingBox& box, const ReferenceModels& refs,
                          const TrackerConfig& cfg);

inline bool update_gate(const Frame& frame, const BoundingBox& box, const ReferenceModels& refs,
                        const TrackerConfig& cfg) {
  return evaluate_gate(frame, box, refs, cfg).passed;
}

}  // namespace anchortrack
