#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "anchortrack/scale.hpp"

using namespace anchortrack;

namespace {

std::vector<Point2> scaled_about(const std::vector<Point2>& pts, Point2 c, double s) {
  std::vector<Point2> out;
  for (const auto& p : pts) out.push_back(c + (p - c) * s);
  return out;
}

const std::vector<Point2> kPoints{{10, 10}, {40, 12}, {25, 44}, {60, 50}, {33, 20}, {5, 37}};

}  // namespace

TEST(FrameRatio, StaticPointsGiveOne) {
  const std::vector<double> lt(kPoints.size(), 0.8);
  EXPECT_DOUBLE_EQ(frame_ratio(kPoints, kPoints, lt).value(), 1.0);
}

TEST(FrameRatio, UniformScaleIsRecovered) {
  const std::vector<double> lt{0.9, 0.3, 0.95, 0.5, 0.7, 0.6};
  const auto curr = scaled_about(kPoints, {30, 30}, 1.1);
  EXPECT_NEAR(frame_ratio(kPoints, curr, lt).value(), 1.1, 1e-12);
}

TEST(FrameRatio, TooFewAnchorsIsAbsent) {
  const std::vector<Point2> two{{0, 0}, {10, 0}};
  EXPECT_FALSE(frame_ratio(two, two, std::vector<double>{0.5, 0.5}).has_value());
  // Four anchors, but only two reach the median.
  const std::vector<Point2> four(kPoints.begin(), kPoints.begin() + 4);
  const std::vector<double> lt{0.1, 0.1, 0.9, 0.8};
  EXPECT_FALSE(frame_ratio(four, four, lt).has_value());
}

TEST(FrameRatio, UsesHubAndMedianSelection) {
  // Anchors below the median are ignored even when their ratios are wild.
  std::vector<Point2> prev{{0, 0}, {10, 0}, {0, 20}, {50, 50}, {70, 10}};
  std::vector<Point2> curr{{0, 0}, {12, 0}, {0, 21}, {90, 90}, {0, 0}};
  const std::vector<double> lt{0.99, 0.8, 0.7, 0.2, 0.1};
  // Hub 0; pairs (0,1) ratio 1.2 and (0,2) ratio 1.05.
  EXPECT_NEAR(frame_ratio(prev, curr, lt).value(), (1.2 + 1.05) / 2.0, 1e-12);
}

TEST(FrameRatio, SkipsCoincidentPairs) {
  std::vector<Point2> prev{{0, 0}, {0.5, 0}, {0, 0.3}};
  const std::vector<double> lt{0.9, 0.9, 0.9};
  EXPECT_FALSE(frame_ratio(prev, prev, lt).has_value());
  prev.push_back({8, 0});
  auto curr = prev;
  curr[3] = {10, 0};
  const std::vector<double> lt4{0.9, 0.9, 0.9, 0.9};
  EXPECT_NEAR(frame_ratio(prev, curr, lt4).value(), 1.25, 1e-12);
}

TEST(FrameRatio, MisalignedInputsThrow) {
  EXPECT_THROW(frame_ratio(kPoints, kPoints, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(MaybeApply, TenFramesCompound) {
  const TrackerConfig cfg;
  ScaleState st;
  const BoundingBox box{{50, 50}, 100, 80};
  ScaleStep out{box, 1.0};
  for (int i = 0; i < 9; ++i) {
    out = maybe_apply(st, 1.005, box, cfg);
    EXPECT_DOUBLE_EQ(out.applied, 1.0);
    EXPECT_EQ(out.box, box);
  }
  out = maybe_apply(st, 1.005, box, cfg);
  const double f = std::pow(1.005, 10);
  EXPECT_NEAR(out.applied, f, 1e-12);
  EXPECT_NEAR(out.box.width, 100.0 * f, 1e-9);
  EXPECT_NEAR(out.box.height, 80.0 * f, 1e-9);
  EXPECT_NEAR(out.box.width, 105.114, 1e-3);
  EXPECT_EQ(out.box.center, box.center);
  EXPECT_DOUBLE_EQ(st.accumulator, 1.0);
  EXPECT_EQ(st.frames_since_apply, 0);
}

TEST(MaybeApply, OutsideClampIsDiscarded) {
  const TrackerConfig cfg;
  ScaleState st;
  const BoundingBox box{{0, 0}, 40, 40};
  ScaleStep out{box, 1.0};
  for (int i = 0; i < 10; ++i) out = maybe_apply(st, 1.02, box, cfg);
  EXPECT_DOUBLE_EQ(out.applied, 1.0);
  EXPECT_EQ(out.box, box);
  EXPECT_DOUBLE_EQ(st.accumulator, 1.0);
  EXPECT_EQ(st.frames_since_apply, 0);
}

TEST(MaybeApply, AbsentRatiosStillCount) {
  const TrackerConfig cfg;
  ScaleState st;
  const BoundingBox box{{0, 0}, 40, 40};
  ScaleStep out{box, 1.0};
  for (int i = 0; i < 10; ++i) out = maybe_apply(st, i == 3 ? std::optional<double>(1.05) : std::nullopt, box, cfg);
  EXPECT_NEAR(out.applied, 1.05, 1e-12);
}

TEST(MaybeApply, ReciprocalPeriodsRestoreSize) {
  const TrackerConfig cfg;
  ScaleState st;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.995, 1.005);
  std::vector<double> r(10);
  for (auto& v : r) v = u(rng);
  BoundingBox box{{10, 10}, 64, 48};
  const BoundingBox start = box;
  for (double v : r) box = maybe_apply(st, v, box, cfg).box;
  for (auto it = r.rbegin(); it != r.rend(); ++it) box = maybe_apply(st, 1.0 / *it, box, cfg).box;
  EXPECT_NEAR(box.width / start.width, 1.0, 1e-6);
  EXPECT_NEAR(box.height / start.height, 1.0, 1e-6);
}
