#include "anchortrack/pipeline.hpp"

#include <stdexcept>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

std::vector<Descriptor> descriptors_of(const std::vector<Keypoint>& keypoints) {
  std::vector<Descriptor> out;
  out.reserve(keypoints.size());
  for (const auto& kp : keypoints) out.push_back(kp.descriptor);
  return out;
}

}  // namespace

const char* to_string(TrackStatus s) {
  return s == TrackStatus::Tracking ? "tracking" : "holding";
}

TrackerState initialize(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg) {
  cfg.validate();
  if (!box.valid()) throw InitializationFailure("initial box has non-positive size");
  TrackerState state;
  state.cfg = cfg;
  state.model = build(frame, box, cfg);
  state.refs = build_references(frame, box, cfg);
  state.scale.width_at_last_apply = box.width;
  state.scale.height_at_last_apply = box.height;
  state.last_box = box;
  state.status = TrackStatus::Tracking;
  return state;
}

FrameResult step(TrackerState& state, const Frame& frame, StepTrace* trace) {
  const TrackerConfig& cfg = state.cfg;
  AnchorModel& model = state.model;

  FrameResult result;
  result.frame_index = frame.index();
  result.box = state.last_box;

  const auto keypoints = detect(frame, std::nullopt, cfg);
  const auto matches = match_descriptors(model.descriptors(), descriptors_of(keypoints), cfg.ratio_test);
  result.matched_count = static_cast<int>(matches.size());

  if (matches.empty()) {
    state.status = TrackStatus::Holding;
    result.status = TrackStatus::Holding;
    if (trace) trace->scores = ScoreMatrix(frame.width(), frame.height());
    return result;
  }

  ScoreMatrix scores = accumulate(model, matches, keypoints, frame.width(), frame.height(), cfg);
  BoundingBox box = state.last_box;
  box.center = localize(scores, state.last_box.center);
  if (trace) trace->scores = std::move(scores);

  for (auto& a : model.anchors) {
    if (!a.matched) continue;
    a.closeness = compute_closeness(a.predicted_center, box.center, cfg);
  }
  for (auto& a : model.anchors) {
    a.lt = adapt_long_term(a, cfg);
    if (a.matched) a.st = update_short_term(a.predicted_center, box.center, cfg);
  }

  // Scale evidence comes only from anchors whose vote reached the localized
  // peak; a mismatched anchor's pair ratios are otherwise unbounded.
  const double support_radius = cfg.vote_truncation * model.vote_sigma;
  std::vector<Point2> prev, curr;
  std::vector<double> lts;
  for (auto& a : model.anchors) {
    if (!a.matched || distance(a.predicted_center, box.center) > support_radius) continue;
    if (a.last_seen == frame.index() - 1) {
      prev.push_back(a.last_position);
      curr.push_back(a.position);
      lts.push_back(a.lt);
    }
    a.last_seen = frame.index();
    a.last_position = a.position;
  }

  if (cfg.scale_enabled) {
    const auto scaled = maybe_apply(state.scale, frame_ratio(prev, curr, lts), box, cfg);
    if (scaled.applied != 1.0) {
      box = scaled.box;
      rescale_vectors(model, scaled.applied);
      model.vote_sigma = vote_sigma(box, cfg);
    }
    result.applied_scale = scaled.applied;
  }
  model.box = box;

  const GateReading gate = evaluate_gate(frame, box, state.refs, cfg);
  if (gate.passed) {
    const int added = add_anchors(model, frame, box, cfg);
    if (trace) trace->anchors_added = added;
    prune(model, cfg);
  }

  state.last_box = box;
  state.status = TrackStatus::Tracking;
  result.box = box;
  result.status = TrackStatus::Tracking;
  result.gate_passed = gate.passed;
  result.gate = gate;
  return result;
}

std::vector<FrameResult> run_sequence(const FrameSource& frames, const BoundingBox& init_box,
                                      const TrackerConfig& cfg, const FrameObserver& observer,
                                      bool trace_scores, TrackerState* final_state) {
  if (frames.size() == 0) throw std::invalid_argument("run_sequence: empty frame source");

  std::vector<FrameResult> results;
  results.reserve(frames.size());

  const Frame first = frames.frame(0);
  TrackerState state = initialize(first, init_box, cfg);
  FrameResult r0;
  r0.frame_index = first.index();
  r0.box = init_box;
  r0.matched_count = static_cast<int>(state.model.anchors.size());
  r0.gate = evaluate_gate(first, init_box, state.refs, state.cfg);
  r0.gate_passed = r0.gate->passed;
  results.push_back(r0);
  if (observer) observer(first, r0, nullptr);

  for (std::size_t i = 1; i < frames.size(); ++i) {
    const Frame frame = frames.frame(i);
    StepTrace trace;
    results.push_back(step(state, frame, trace_scores ? &trace : nullptr));
    if (observer) observer(frame, results.back(), trace_scores ? &trace : nullptr);
  }
  if (final_state) *final_state = std::move(state);
  return results;
}

}  // namespace anchortrack
