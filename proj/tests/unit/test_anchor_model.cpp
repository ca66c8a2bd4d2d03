#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "anchortrack/anchor_model.hpp"
#include "anchortrack/errors.hpp"
#include "oracles.hpp"

using namespace anchortrack;

namespace {

// Bright quadrant x >= 32, y >= 32: a single corner near (31.5, 31.5).
Frame quadrant_frame() {
  std::vector<std::uint8_t> g(64 * 64, 20);
  for (int y = 32; y < 64; ++y)
    for (int x = 32; x < 64; ++x) g[y * 64 + x] = 230;
  return oracle::gray_frame(64, 64, g);
}

AnchorPoint anchor_with_lt(double lt) {
  AnchorPoint a;
  a.lt = lt;
  return a;
}

}  // namespace

TEST(InitCloseness, Examples) {
  const TrackerConfig cfg;
  EXPECT_NEAR(init_closeness({0, 0}, cfg), 1.0, 1e-12);
  EXPECT_NEAR(init_closeness({36, 48}, cfg), 0.7, 1e-12);
  EXPECT_NEAR(init_closeness({0, -250}, cfg), 0.5, 1e-12);
}

TEST(ComputeCloseness, Examples) {
  const TrackerConfig cfg;
  EXPECT_NEAR(compute_closeness({5, 5}, {5, 5}, cfg), 1.0, 1e-12);
  EXPECT_NEAR(compute_closeness({0, 0}, {60, 80}, cfg), 0.5, 1e-12);
  EXPECT_NEAR(compute_closeness({0, 0}, {300, 0}, cfg), 0.0, 1e-12);
}

TEST(ShortTerm, Examples) {
  const TrackerConfig cfg;
  EXPECT_NEAR(update_short_term({1, 1}, {1, 1}, cfg), 1.0, 1e-12);
  EXPECT_NEAR(update_short_term({0, 0}, {50, 50}, cfg), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(update_short_term({0, 0}, {30, 40}, cfg), std::exp(-0.5), 1e-9);
}

TEST(ClosenessAndShortTerm, DependOnlyOnDistance) {
  const TrackerConfig cfg;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0, 250), ang(0, 6.283185307179586);
  for (int i = 0; i < 200; ++i) {
    const double d = r(rng), a1 = ang(rng), a2 = ang(rng);
    const Point2 p{10, -4};
    const Point2 q1 = p + Point2{d * std::cos(a1), d * std::sin(a1)};
    const Point2 q2 = p + Point2{d * std::cos(a2), d * std::sin(a2)};
    EXPECT_NEAR(compute_closeness(p, q1, cfg), compute_closeness(p, q2, cfg), 1e-12);
    EXPECT_NEAR(update_short_term(p, q1, cfg), update_short_term(p, q2, cfg), 1e-12);
  }
}

TEST(LongTerm, Examples) {
  const TrackerConfig cfg;
  AnchorPoint a = anchor_with_lt(0.5);
  a.matched = true;
  a.closeness = 1.0;
  EXPECT_NEAR(adapt_long_term(a, cfg), 0.55, 1e-12);
  a.matched = false;
  EXPECT_NEAR(adapt_long_term(a, cfg), 0.45, 1e-12);
  AnchorPoint z = anchor_with_lt(0.0);
  z.matched = true;
  z.closeness = 0.37;
  EXPECT_NEAR(adapt_long_term(z, cfg), 0.037, 1e-12);
}

TEST(LongTerm, UnmatchedDecayFollowsClosedForm) {
  const TrackerConfig cfg;
  AnchorPoint a = anchor_with_lt(0.83);
  for (int t = 1; t <= 40; ++t) {
    a.lt = adapt_long_term(a, cfg);
    EXPECT_NEAR(a.lt, 0.83 * std::pow(0.9, t), 1e-12);
  }
}

TEST(LongTerm, StaysInUnitIntervalAndConverges) {
  const TrackerConfig cfg;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int run = 0; run < 50; ++run) {
    AnchorPoint a = anchor_with_lt(u(rng));
    for (int t = 0; t < 100; ++t) {
      a.matched = u(rng) < 0.7;
      a.closeness = u(rng);
      a.lt = adapt_long_term(a, cfg);
      ASSERT_GE(a.lt, 0.0);
      ASSERT_LE(a.lt, 1.0);
    }
  }
  AnchorPoint b = anchor_with_lt(0.5);
  b.matched = true;
  b.closeness = 1.0;
  double prev = b.lt;
  for (int t = 0; t < 300; ++t) {
    b.lt = adapt_long_term(b, cfg);
    EXPECT_GE(b.lt, prev);
    prev = b.lt;
  }
  EXPECT_NEAR(b.lt, 1.0, 1e-9);
}

TEST(VoteSigma, FloorAndRelative) {
  const TrackerConfig cfg;
  EXPECT_DOUBLE_EQ(vote_sigma(BoundingBox{{0, 0}, 20, 20}, cfg), 2.0);
  EXPECT_NEAR(vote_sigma(BoundingBox{{0, 0}, 100, 64}, cfg), 0.05 * 80.0, 1e-12);
}

TEST(Build, LtFollowsInitialCloseness) {
  const auto f = quadrant_frame();
  const TrackerConfig cfg;
  const auto kps = detect(f, std::nullopt, cfg);
  ASSERT_EQ(kps.size(), 1u);
  const BoundingBox box{kps[0].position, 30, 30};
  const auto model = build(f, box, cfg);
  ASSERT_EQ(model.anchors.size(), 1u);
  const auto& a = model.anchors[0];
  EXPECT_NEAR(a.constraint.x, 0.0, 1e-12);
  EXPECT_NEAR(a.constraint.y, 0.0, 1e-12);
  EXPECT_NEAR(a.lt, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(a.st, 1.0);
  EXPECT_TRUE(a.matched);

  const BoundingBox off{kps[0].position + Point2{10, 0}, 40, 40};
  const auto m2 = build(f, off, cfg);
  ASSERT_EQ(m2.anchors.size(), 1u);
  EXPECT_NEAR(m2.anchors[0].constraint.x, 10.0, 1e-12);
  EXPECT_NEAR(m2.anchors[0].lt, 0.95, 1e-12);
}

TEST(Build, UniformBoxFails) {
  const auto f = oracle::gray_frame(64, 64, std::vector<std::uint8_t>(64 * 64, 77));
  EXPECT_THROW(build(f, BoundingBox{{32, 32}, 20, 20}, TrackerConfig{}), InitializationFailure);
}

TEST(Prune, Examples) {
  const TrackerConfig cfg;
  AnchorModel m;
  for (double lt : {0.05, 0.5, 0.09}) m.anchors.push_back(anchor_with_lt(lt));
  prune(m, cfg);
  ASSERT_EQ(m.anchors.size(), 1u);
  EXPECT_DOUBLE_EQ(m.anchors[0].lt, 0.5);

  AnchorModel keep;
  for (double lt : {0.1, 0.4, 0.99}) keep.anchors.push_back(anchor_with_lt(lt));
  prune(keep, cfg);
  EXPECT_EQ(keep.anchors.size(), 3u);

  AnchorModel low;
  for (double lt : {0.02, 0.08, 0.05}) low.anchors.push_back(anchor_with_lt(lt));
  prune(low, cfg);
  ASSERT_EQ(low.anchors.size(), 1u);
  EXPECT_DOUBLE_EQ(low.anchors[0].lt, 0.08);
}

TEST(AddAnchors, NoCornersLeavesModelUnchanged) {
  const auto f = oracle::gray_frame(64, 64, std::vector<std::uint8_t>(64 * 64, 77));
  AnchorModel m;
  m.anchors.push_back(anchor_with_lt(0.3));
  EXPECT_EQ(add_anchors(m, f, BoundingBox{{32, 32}, 30, 30}, TrackerConfig{}), 0);
  EXPECT_EQ(m.anchors.size(), 1u);
}

TEST(AddAnchors, CandidateAtCenterGetsFullLt) {
  const auto f = quadrant_frame();
  const TrackerConfig cfg;
  const Point2 corner = detect(f, std::nullopt, cfg).at(0).position;
  AnchorModel m;
  ASSERT_EQ(add_anchors(m, f, BoundingBox{corner, 30, 30}, cfg), 1);
  EXPECT_NEAR(m.anchors.at(0).lt, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.anchors[0].st, 1.0);
}

TEST(AddAnchors, SkipsCandidatesNearMatchedAnchors) {
  const auto f = quadrant_frame();
  const TrackerConfig cfg;
  const Point2 corner = detect(f, std::nullopt, cfg).at(0).position;
  AnchorModel m;
  AnchorPoint a = anchor_with_lt(0.6);
  a.matched = true;
  a.position = corner + Point2{1.5, 0.5};
  m.anchors.push_back(a);
  EXPECT_EQ(add_anchors(m, f, BoundingBox{corner, 30, 30}, cfg), 0);
  m.anchors[0].matched = false;
  EXPECT_EQ(add_anchors(m, f, BoundingBox{corner, 30, 30}, cfg), 1);
}

TEST(AddAnchors, FullModelEvictsWeakest) {
  const auto f = quadrant_frame();
  TrackerConfig cfg;
  cfg.max_anchors = 3;
  const Point2 corner = detect(f, std::nullopt, cfg).at(0).position;
  AnchorModel m;
  for (double lt : {0.6, 0.2, 0.7}) m.anchors.push_back(anchor_with_lt(lt));
  // 20 px from the box center: initial lt 0.9.
  const BoundingBox box{corner + Point2{12, 16}, 40, 40};
  ASSERT_EQ(add_anchors(m, f, box, cfg), 1);
  ASSERT_EQ(m.anchors.size(), 3u);
  std::vector<double> lts;
  for (const auto& a : m.anchors) lts.push_back(a.lt);
  std::sort(lts.begin(), lts.end());
  EXPECT_DOUBLE_EQ(lts[0], 0.6);
  EXPECT_DOUBLE_EQ(lts[1], 0.7);
  EXPECT_NEAR(lts[2], 0.9, 1e-9);

  // A candidate weaker than every anchor is dropped.
  AnchorModel strong;
  for (double lt : {0.95, 0.97, 0.99}) strong.anchors.push_back(anchor_with_lt(lt));
  EXPECT_EQ(add_anchors(strong, f, box, cfg), 0);
}

TEST(RescaleVectors, Examples) {
  AnchorModel m;
  AnchorPoint a;
  a.constraint = {10, -20};
  m.anchors.push_back(a);
  rescale_vectors(m, 1.0);
  EXPECT_EQ(m.anchors[0].constraint, (Point2{10, -20}));
  rescale_vectors(m, 1.1);
  EXPECT_NEAR(m.anchors[0].constraint.x, 11.0, 1e-12);
  EXPECT_NEAR(m.anchors[0].constraint.y, -22.0, 1e-12);
  rescale_vectors(m, 0.9);
  rescale_vectors(m, 1.0 / 0.9);
  EXPECT_NEAR(m.anchors[0].constraint.x, 11.0, 1e-9);
  EXPECT_NEAR(m.anchors[0].constraint.y, -22.0, 1e-9);
}

TEST(ModelDump, OneLinePerAnchor) {
  AnchorModel m;
  AnchorPoint a;
  a.constraint = {1.5, -2};
  a.lt = 0.25;
  a.st = 0.5;
  a.matched = true;
  m.anchors.push_back(a);
  m.anchors.push_back(anchor_with_lt(0.75));
  std::ostringstream os;
  write_model_dump(os, m);
  EXPECT_EQ(os.str(), "1.5\t-2\t0.25\t0.5\t1\n0\t0\t0.75\t1\t0\n");
}
