#include "anchortrack/anchor_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

constexpr double kDuplicateRadius = 2.0;

AnchorPoint enrol(AnchorModel& model, Keypoint kp, Point2 center, std::int64_t frame_index,
                  const TrackerConfig& cfg) {
  AnchorPoint a;
  a.id = model.next_id++;
  a.descriptor = std::move(kp.descriptor);
  a.constraint = center - kp.position;
  a.lt = init_closeness(a.constraint, cfg);
  a.st = 1.0;
  a.position = kp.position;
  a.predicted_center = center;
  a.closeness = a.lt;
  a.last_seen = frame_index;
  a.last_position = kp.position;
  return a;
}

}  // namespace

std::vector<Descriptor> AnchorModel::descriptors() const {
  std::vector<Descriptor> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) out.push_back(a.descriptor);
  return out;
}

double init_closeness(Point2 constraint, const TrackerConfig& cfg) {
  return std::max(1.0 - cfg.closeness_alpha * norm(constraint), cfg.lt_init_floor);
}

double compute_closeness(Point2 predicted, Point2 final_center, const TrackerConfig& cfg) {
  return std::max(1.0 - cfg.closeness_alpha * distance(final_center, predicted), 0.0);
}

double update_short_term(Point2 predicted, Point2 final_center, const TrackerConfig& cfg) {
  return std::exp(-squared_norm(predicted - final_center) / cfg.st_eta);
}

double adapt_long_term(const AnchorPoint& anchor, const TrackerConfig& cfg) {
  const double kept = (1.0 - cfg.lt_delta) * anchor.lt;
  return anchor.matched ? kept + cfg.lt_delta * anchor.closeness : kept;
}

double vote_sigma(const BoundingBox& box, const TrackerConfig& cfg) {
  return std::max(cfg.vote_sigma_min, cfg.vote_sigma_rel * std::sqrt(box.area()));
}

AnchorModel build(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg) {
  auto keypoints = detect(frame, box, cfg);
  if (keypoints.empty()) {
    throw InitializationFailure("no keypoints detected inside the initial box");
  }
  AnchorModel model;
  model.box = box;
  model.vote_sigma = vote_sigma(box, cfg);
  model.anchors.reserve(keypoints.size());
  for (auto& kp : keypoints) {
    auto a = enrol(model, std::move(kp), box.center, frame.index(), cfg);
    a.matched = true;
    model.anchors.push_back(std::move(a));
  }
  return model;
}

void prune(AnchorModel& model, const TrackerConfig& cfg) {
  if (model.anchors.empty()) return;
  const auto strongest = std::max_element(
      model.anchors.begin(), model.anchors.end(),
      [](const AnchorPoint& a, const AnchorPoint& b) { return a.lt < b.lt; });
  if (strongest->lt < cfg.lt_min) {
    AnchorPoint keep = std::move(*strongest);
    model.anchors.clear();
    model.anchors.push_back(std::move(keep));
    return;
  }
  std::erase_if(model.anchors, [&](const AnchorPoint& a) { return a.lt < cfg.lt_min; });
}

int add_anchors(AnchorModel& model, const Frame& frame, const BoundingBox& box,
                const TrackerConfig& cfg) {
  auto candidates = detect(frame, box, cfg);

  std::vector<Point2> occupied;
  for (const auto& a : model.anchors) {
    if (a.matched) occupied.push_back(a.position);
  }

  int added = 0;
  const auto capacity = static_cast<std::size_t>(cfg.max_anchors);
  for (auto& kp : candidates) {
    const bool duplicate = std::any_of(occupied.begin(), occupied.end(), [&](Point2 p) {
      return distance(p, kp.position) <= kDuplicateRadius;
    });
    if (duplicate) continue;

    auto anchor = enrol(model, std::move(kp), box.center, frame.index(), cfg);
    if (model.anchors.size() >= capacity) {
      const auto weakest = std::min_element(
          model.anchors.begin(), model.anchors.end(),
          [](const AnchorPoint& a, const AnchorPoint& b) { return a.lt < b.lt; });
      if (!(anchor.lt > weakest->lt)) continue;
      *weakest = std::move(anchor);
    } else {
      model.anchors.push_back(std::move(anchor));
    }
    ++added;
  }
  return added;
}

void rescale_vectors(AnchorModel& model, double s) {
  for (auto& a : model.anchors) a.constraint = a.constraint * s;
}

void write_model_dump(std::ostream& os, const AnchorModel& model) {
  for (const auto& a : model.anchors) {
    os << a.constraint.x << '\t' << a.constraint.y << '\t' << a.lt << '\t' << a.st << '\t'
       << (a.matched ? 1 : 0) << '\n';
  }
}

}  // namespace anchortrack
