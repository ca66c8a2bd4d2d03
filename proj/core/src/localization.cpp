#include "anchortrack/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anchortrack/errors.hpp"

namespace anchortrack {

bool ScoreMatrix::all_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void stamp(ScoreMatrix& sm, const VoteStamp& v, double truncation) {
  if (v.weight == 0.0) return;
  const double radius = truncation * v.sigma;
  const double r2 = radius * radius;
  const double inv = 1.0 / (2.0 * v.sigma * v.sigma);
  const int x0 = std::max(0, static_cast<int>(std::ceil(v.center.x - radius)));
  const int x1 = std::min(sm.width() - 1, static_cast<int>(std::floor(v.center.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(v.center.y - radius)));
  const int y1 = std::min(sm.height() - 1, static_cast<int>(std::floor(v.center.y + radius)));
  for (int y = y0; y <= y1; ++y) {
    const double dy = y - v.center.y;
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - v.center.x;
      const double d2 = dx * dx + dy * dy;
      if (d2 > r2) continue;
      sm.at(x, y) += v.weight * std::exp(-d2 * inv);
    }
  }
}

ScoreMatrix accumulate(AnchorModel& model, std::span<const MatchPair> matches,
                       std::span<const Keypoint> frame_keypoints, int width, int height,
                       const TrackerConfig& cfg) {
  ScoreMatrix sm(width, height);
  for (auto& a : model.anchors) a.matched = false;
  for (const auto& m : matches) {
    AnchorPoint& a = model.anchors[m.model_index];
    a.matched = true;
    a.position = frame_keypoints[m.frame_index].position;
    a.predicted_center = a.position + a.constraint;
    stamp(sm, {a.predicted_center, a.lt * a.st, model.vote_sigma}, cfg.vote_truncation);
  }
  return sm;
}

Point2 localize(const ScoreMatrix& sm, Point2 previous_center) {
  long long best_key = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  int best_x = -1, best_y = -1;
  for (int y = 0; y < sm.height(); ++y) {
    for (int x = 0; x < sm.width(); ++x) {
      const long long key = std::llround(sm.at(x, y) * 1e7);
      if (key <= 0 || key < best_key) continue;
      const double d = distance({static_cast<double>(x), static_cast<double>(y)}, previous_center);
      if (key > best_key || d < best_dist) {
        best_key = key;
        best_dist = d;
        best_x = x;
        best_y = y;
      }
    }
  }
  if (best_x < 0) {
    // Scores too small to survive rounding; fall back to the exact maximum.
    double best = 0.0;
    for (int y = 0; y < sm.height(); ++y) {
      for (int x = 0; x < sm.width(); ++x) {
        if (sm.at(x, y) > best) {
          best = sm.at(x, y);
          best_x = x;
          best_y = y;
        }
      }
    }
    if (best_x < 0) throw NoVotes();
  }
  return {static_cast<double>(best_x), static_cast<double>(best_y)};
}

std::vector<std::uint8_t> heatmap(const ScoreMatrix& sm) {
  const auto values = sm.values();
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  std::vector<std::uint8_t> out(values.size(), 0);
  if (peak <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * values[i] / peak));
  }
  return out;
}

}  // namespace anchortrack
