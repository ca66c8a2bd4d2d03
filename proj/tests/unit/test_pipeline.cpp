#include <gtest/gtest.h>

#include <random>

#include "anchortrack/errors.hpp"
#include "anchortrack/pipeline.hpp"
#include "anchortrack/synth.hpp"
#include "oracles.hpp"

using namespace anchortrack;

namespace {

SynthSequence still_sequence(int frames) {
  SynthParams p = preset("translation");
  p.frames = frames;
  p.velocity_x = 0.0;
  p.noise_sigma = 0.0;
  return generate(make_spec(p));
}

Frame shifted(const Frame& f, int dx, int dy) {
  std::vector<std::uint8_t> rgb(f.rgb().size());
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) {
      const int sx = std::clamp(x - dx, 0, f.width() - 1);
      const int sy = std::clamp(y - dy, 0, f.height() - 1);
      for (int c = 0; c < 3; ++c)
        rgb[(static_cast<std::size_t>(y) * f.width() + x) * 3 + c] =
            f.rgb()[(static_cast<std::size_t>(sy) * f.width() + sx) * 3 + c];
    }
  return Frame(f.width(), f.height(), std::move(rgb), f.index() + 1);
}

Frame noise(int w, int h, std::int64_t index) {
  std::mt19937_64 rng(99);
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : rgb) v = static_cast<std::uint8_t>(rng() & 0xff);
  return Frame(w, h, std::move(rgb), index);
}

}  // namespace

TEST(Initialize, TexturedBoxSelfTestPasses) {
  const auto seq = still_sequence(1);
  const auto state = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  EXPECT_FALSE(state.model.anchors.empty());
  EXPECT_TRUE(update_gate(seq.frames[0], seq.truth[0], state.refs, state.cfg));
  EXPECT_EQ(state.status, TrackStatus::Tracking);
}

TEST(Initialize, UniformBoxFails) {
  const auto f = oracle::gray_frame(64, 64, std::vector<std::uint8_t>(64 * 64, 50));
  EXPECT_THROW(initialize(f, BoundingBox{{32, 32}, 20, 20}, TrackerConfig{}), InitializationFailure);
}

TEST(Initialize, Deterministic) {
  const auto seq = still_sequence(1);
  const auto a = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  const auto b = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  ASSERT_EQ(a.model.anchors.size(), b.model.anchors.size());
  for (std::size_t i = 0; i < a.model.anchors.size(); ++i) {
    EXPECT_EQ(a.model.anchors[i].descriptor, b.model.anchors[i].descriptor);
    EXPECT_EQ(a.model.anchors[i].constraint, b.model.anchors[i].constraint);
    EXPECT_EQ(a.model.anchors[i].lt, b.model.anchors[i].lt);
  }
  EXPECT_EQ(a.refs.lbsp.codes, b.refs.lbsp.codes);
  EXPECT_EQ(a.refs.hist.bins, b.refs.hist.bins);
}

TEST(Step, IdenticalFrameKeepsBox) {
  const auto seq = still_sequence(2);
  auto state = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  const auto anchors = state.model.anchors.size();
  const auto r = step(state, seq.frames[0].with_index(1));
  EXPECT_EQ(r.status, TrackStatus::Tracking);
  EXPECT_LE(center_error(r.box, seq.truth[0]), 1.0);
  // The frame-side keypoint cap can crowd out a few box keypoints.
  EXPECT_GT(static_cast<std::size_t>(r.matched_count), anchors / 2);
}

TEST(Step, TranslationMovesBoxRigidly) {
  const auto seq = still_sequence(1);
  auto state = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  const auto r = step(state, shifted(seq.frames[0], 7, 3));
  EXPECT_EQ(r.status, TrackStatus::Tracking);
  EXPECT_NEAR(r.box.center.x, seq.truth[0].center.x + 7.0, 1.0);
  EXPECT_NEAR(r.box.center.y, seq.truth[0].center.y + 3.0, 1.0);
  EXPECT_DOUBLE_EQ(r.box.width, seq.truth[0].width);
}

TEST(Step, NoiseFrameHoldsAndLeavesStateUntouched) {
  const auto seq = still_sequence(1);
  auto state = initialize(seq.frames[0], seq.truth[0], TrackerConfig{});
  const auto before = state;
  const auto r = step(state, noise(seq.frames[0].width(), seq.frames[0].height(), 1));
  EXPECT_EQ(r.status, TrackStatus::Holding);
  EXPECT_EQ(r.matched_count, 0);
  EXPECT_EQ(r.box, before.last_box);
  EXPECT_FALSE(r.gate.has_value());
  ASSERT_EQ(state.model.anchors.size(), before.model.anchors.size());
  for (std::size_t i = 0; i < state.model.anchors.size(); ++i) {
    EXPECT_EQ(state.model.anchors[i].lt, before.model.anchors[i].lt);
    EXPECT_EQ(state.model.anchors[i].st, before.model.anchors[i].st);
    EXPECT_EQ(state.model.anchors[i].constraint, before.model.anchors[i].constraint);
  }
  EXPECT_EQ(state.scale.accumulator, before.scale.accumulator);
  EXPECT_EQ(state.scale.frames_since_apply, before.scale.frames_since_apply);
  EXPECT_EQ(state.status, TrackStatus::Holding);
}

TEST(RunSequence, SingleFrameReturnsInitBox) {
  const auto seq = still_sequence(1);
  const InMemorySequence src(seq.frames);
  const auto r = run_sequence(src, seq.truth[0], TrackerConfig{});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].box, seq.truth[0]);
  EXPECT_TRUE(r[0].gate_passed);
}

TEST(RunSequence, EmptySourceThrows) {
  const std::vector<Frame> none;
  EXPECT_THROW(run_sequence(InMemorySequence(none), BoundingBox{{0, 0}, 1, 1}, TrackerConfig{}),
               std::invalid_argument);
}

TEST(RunSequence, TranslationWithinThreePixels) {
  SynthParams p = preset("translation");
  p.frames = 50;
  const auto seq = generate(make_spec(p));
  const auto r = run_sequence(InMemorySequence(seq.frames), seq.truth[0], TrackerConfig{});
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) sum += center_error(r[i].box, seq.truth[i]);
  EXPECT_LE(sum / r.size(), 3.0);
}

TEST(RunSequence, DeterministicAndObserverSeesEveryFrame) {
  SynthParams p = preset("translation");
  p.frames = 12;
  const auto seq = generate(make_spec(p));
  int calls = 0, traced = 0;
  const auto a = run_sequence(
      InMemorySequence(seq.frames), seq.truth[0], TrackerConfig{},
      [&](const Frame&, const FrameResult&, const StepTrace* t) {
        ++calls;
        if (t && t->scores) ++traced;
      },
      true);
  const auto b = run_sequence(InMemorySequence(seq.frames), seq.truth[0], TrackerConfig{});
  EXPECT_EQ(calls, 12);
  EXPECT_EQ(traced, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].box, b[i].box);
    EXPECT_EQ(a[i].matched_count, b[i].matched_count);
    EXPECT_EQ(a[i].applied_scale, b[i].applied_scale);
  }
}

TEST(RunSequence, AnchorSetOnlyGrowsOnGatePass) {
  SynthParams p = preset("gain_ramp");
  p.frames = 30;
  const auto seq = generate(make_spec(p));
  TrackerConfig cfg;
  auto state = initialize(seq.frames[0], seq.truth[0], cfg);
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    const auto before = state.model.anchors.size();
    const auto r = step(state, seq.frames[i]);
    if (!r.gate_passed) EXPECT_LE(state.model.anchors.size(), before);
    EXPECT_LE(state.model.anchors.size(), static_cast<std::size_t>(cfg.max_anchors));
    EXPECT_FALSE(state.model.anchors.empty());
  }
}
