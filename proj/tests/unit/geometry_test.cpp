#include "jnr/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "jnr/rng.hpp"

namespace jnr {
namespace {

Keypoints Torso(Point2 ls, Point2 rs, Point2 lh, Point2 rh) {
  return {{kLeftShoulder, ls}, {kRightShoulder, rs}, {kLeftHip, lh}, {kRightHip, rh}};
}

TEST(TorsoCrop, PadsLeftRightAndBottomOnly) {
  const Keypoints kp = Torso({10, 10}, {30, 10}, {10, 50}, {30, 50});
  EXPECT_EQ(TorsoCrop(kp, {100, 100}, 5), (TorsoBox{5, 10, 35, 55}));
}

TEST(TorsoCrop, ZeroPadIsTheJointHull) {
  const Keypoints kp = Torso({10, 10}, {30, 10}, {10, 50}, {30, 50});
  EXPECT_EQ(TorsoCrop(kp, {100, 100}, 0), (TorsoBox{10, 10, 30, 50}));
}

TEST(TorsoCrop, ClampsToImage) {
  const Keypoints kp = Torso({2, 10}, {30, 10}, {2, 50}, {30, 50});
  const TorsoBox box = TorsoCrop(kp, {100, 100}, 5);
  EXPECT_EQ(box.x0, std::max(0, 2 - 5));
  EXPECT_EQ(box, (TorsoBox{0, 10, 35, 55}));

  const Keypoints far = Torso({80, 70}, {98, 70}, {80, 97}, {98, 97});
  EXPECT_EQ(TorsoCrop(far, {100, 100}, 5), (TorsoBox{75, 70, 100, 100}));
}

TEST(TorsoCrop, MissingJointIsNamed) {
  Keypoints kp = Torso({10, 10}, {30, 10}, {10, 50}, {30, 50});
  kp.erase(kLeftHip);
  try {
    TorsoCrop(kp, {100, 100});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("left_hip"), std::string::npos);
  }
}

TEST(TorsoCrop, DegenerateBoxIsRejected) {
  const Keypoints outside = Torso({150, 10}, {170, 10}, {150, 50}, {170, 50});
  try {
    TorsoCrop(outside, {100, 100});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "degenerate crop");
  }
  const Keypoints line = Torso({10, 10}, {10, 10}, {10, 10}, {10, 10});
  EXPECT_THROW(TorsoCrop(line, {100, 100}, 0), ValidationError);
}

TEST(TorsoCrop, TranslationEquivariantBeforeClamping) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Keypoints kp;
    for (const char* name : {kLeftShoulder, kRightShoulder, kLeftHip, kRightHip}) {
      // Quarter-pixel coordinates keep the shifted values exact.
      kp[name] = {static_cast<double>(rng.Index(800)) / 4.0, static_cast<double>(rng.Index(800)) / 4.0};
    }
    const int dx = static_cast<int>(rng.Index(400)) - 200;
    const int dy = static_cast<int>(rng.Index(400)) - 200;
    Keypoints shifted;
    for (const auto& [name, p] : kp) shifted[name] = {p.x + dx, p.y + dy};
    const int pad = static_cast<int>(rng.Index(8));
    const TorsoBox a = TorsoBounds(kp, pad);
    const TorsoBox b = TorsoBounds(shifted, pad);
    EXPECT_EQ(b, (TorsoBox{a.x0 + dx, a.y0 + dy, a.x1 + dx, a.y1 + dy}));
  }
}

TEST(BallDetection, ExactReferenceSizeIsBall) {
  const BallReference ref{20.0, 18.0, 0.2};
  std::vector<BboxSize> boxes(5, {20.0, 18.0});
  EXPECT_TRUE(DetectBallTracklet(boxes, ref));
}

TEST(BallDetection, PlayerSizedBoxesAreNotBall) {
  const BallReference ref{20.0, 18.0, 0.2};
  std::vector<BboxSize> boxes(5, {60.0, 54.0});
  EXPECT_FALSE(DetectBallTracklet(boxes, ref));
}

TEST(BallDetection, MedianInsideBand) {
  // Medians (22, 19) vs reference (20, 20), 20% band: 22 <= 24 and 19 >= 16.
  const BallReference ref{20.0, 20.0, 0.2};
  const std::vector<BboxSize> boxes = {{22, 19}, {50, 90}, {21, 18}, {23, 19}, {5, 30}};
  ASSERT_EQ(Median(std::vector<double>{22, 50, 21, 23, 5}), 22.0);
  ASSERT_EQ(Median(std::vector<double>{19, 90, 18, 19, 30}), 19.0);
  EXPECT_TRUE(DetectBallTracklet(boxes, ref));
}

TEST(BallDetection, InvariantToOrderAndMedianDuplication) {
  const BallReference ref{20.0, 20.0, 0.2};
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BboxSize> boxes;
    const std::size_t n = 2 * rng.Index(5) + 1;
    for (std::size_t i = 0; i < n; ++i) boxes.push_back({rng.Uniform(10, 30), rng.Uniform(10, 30)});
    const bool expected = DetectBallTracklet(boxes, ref);

    auto shuffled = boxes;
    rng.Shuffle(std::span<BboxSize>(shuffled));
    EXPECT_EQ(DetectBallTracklet(shuffled, ref), expected);

    std::vector<double> ws;
    std::vector<double> hs;
    for (const auto& b : boxes) {
      ws.push_back(b.w);
      hs.push_back(b.h);
    }
    auto dup = boxes;
    dup.push_back({Median(ws), Median(hs)});
    EXPECT_EQ(DetectBallTracklet(dup, ref), expected);
  }
}

TEST(BallDetection, ZeroToleranceAcceptsOnlyExactMedian) {
  const BallReference ref{20.0, 20.0, 0.0};
  EXPECT_TRUE(DetectBallTracklet(std::vector<BboxSize>{{20, 20}, {19, 25}, {21, 20}}, ref));
  EXPECT_FALSE(DetectBallTracklet(std::vector<BboxSize>{{20.001, 20}}, ref));
}

TEST(BallDetection, EmptyListIsAnError) {
  EXPECT_THROW(DetectBallTracklet(std::vector<BboxSize>{}, BallReference{20, 20, 0.2}), ValidationError);
}

}  // namespace
}  // namespace jnr
