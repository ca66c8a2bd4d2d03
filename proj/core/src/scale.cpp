#include "anchortrack/scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace anchortrack {
namespace {

constexpr std::size_t kMinAnchors = 3;
constexpr double kMinPairDistance = 1.0;

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::optional<double> frame_ratio(std::span<const Point2> prev_positions,
                                  std::span<const Point2> curr_positions,
                                  std::span<const double> lt_values) {
  if (prev_positions.size() != curr_positions.size() || prev_positions.size() != lt_values.size()) {
    throw std::invalid_argument("frame_ratio: inputs are not index-aligned");
  }
  if (lt_values.size() < kMinAnchors) return std::nullopt;

  const double bar = median({lt_values.begin(), lt_values.end()});
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < lt_values.size(); ++i) {
    if (lt_values[i] >= bar) selected.push_back(i);
  }
  if (selected.size() < kMinAnchors) return std::nullopt;

  // First index wins among equal lt.
  std::size_t hub = selected.front();
  for (std::size_t i : selected) {
    if (lt_values[i] > lt_values[hub]) hub = i;
  }

  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i : selected) {
    if (i == hub) continue;
    const double before = distance(prev_positions[hub], prev_positions[i]);
    if (before < kMinPairDistance) continue;
    sum += distance(curr_positions[hub], curr_positions[i]) / before;
    ++pairs;
  }
  if (pairs == 0) return std::nullopt;
  return sum / pairs;
}

ScaleStep maybe_apply(ScaleState& state, std::optional<double> ratio, const BoundingBox& box,
                      const TrackerConfig& cfg) {
  ScaleStep out{box, 1.0};
  if (ratio) state.accumulator *= *ratio;
  ++state.frames_since_apply;
  if (state.frames_since_apply < cfg.scale_period) return out;

  if (std::abs(state.accumulator - 1.0) <= cfg.scale_clamp) {
    out.box.width *= state.accumulator;
    out.box.height *= state.accumulator;
    out.applied = state.accumulator;
    state.width_at_last_apply = out.box.width;
    state.height_at_last_apply = out.box.height;
  }
  state.accumulator = 1.0;
  state.frames_since_apply = 0;
  return out;
}

}  // namespace anchortrack
