#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "anchortrack/anchor_model.hpp"
#include "anchortrack/config.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/global_models.hpp"
#include "anchortrack/localization.hpp"
#include "anchortrack/scale.hpp"

namespace anchortrack {

enum class TrackStatus { Tracking, Holding };

const char* to_string(TrackStatus s);

struct TrackerState {
  AnchorModel model;
  ReferenceModels refs;
  ScaleState scale;
  TrackerConfig cfg;
  BoundingBox last_box;
  TrackStatus status = TrackStatus::Tracking;
};

struct FrameResult {
  std::int64_t frame_index = 0;
  BoundingBox box;
  TrackStatus status = TrackStatus::Tracking;
  int matched_count = 0;
  bool gate_passed = false;
  double applied_scale = 1.0;
  std::optional<GateReading> gate;  ///< absent on holding frames
};

/// Optional per-step outputs for diagnostics.
struct StepTrace {
  std::optional<ScoreMatrix> scores;
  int anchors_added = 0;
};

TrackerState initialize(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg);

/// One tracking iteration: detect over the whole frame, match against the
/// anchors, vote, localise, adapt consistencies, estimate scale, and update
/// the model when the appearance gate passes. A frame without matches leaves
/// the state untouched and reports Holding.
FrameResult step(TrackerState& state, const Frame& frame, StepTrace* trace = nullptr);

/// Random-access frame provider.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual Frame frame(std::size_t i) const = 0;
};

class InMemorySequence final : public FrameSource {
 public:
  explicit InMemorySequence(std::span<const Frame> frames) : frames_(frames) {}
  std::size_t size() const override { return frames_.size(); }
  Frame frame(std::size_t i) const override { return frames_[i]; }

 private:
  std::span<const Frame> frames_;
};

/// Called after every frame with the result and, when tracing was requested,
/// the step trace. Frame 0 has no trace.
using FrameObserver = std::function<void(const Frame&, const FrameResult&, const StepTrace*)>;

/// Initialises on frame 0 (whose result is the initial box) and steps through
/// the rest in order. Throws std::invalid_argument on an empty source. The
/// final tracker state is moved into `final_state` when one is given.
std::vector<FrameResult> run_sequence(const FrameSource& frames, const BoundingBox& init_box,
                                      const TrackerConfig& cfg, const FrameObserver& observer = {},
                                      bool trace_scores = false, TrackerState* final_state = nullptr);

}  // namespace anchortrack
