#include "jnr/evaluation.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "jnr/interchange.hpp"

namespace jnr {
namespace {

using testing::MakeTracklet;
using testing::NumberFrame;

const std::filesystem::path kFixtures = JNR_TEST_FIXTURES_DIR;

LabelMap Labels(std::initializer_list<std::pair<const char*, int>> items) {
  LabelMap out;
  for (const auto& [id, v] : items) out.emplace(id, TrackletLabel::FromValue(v));
  return out;
}

TEST(EvaluateAccuracy, PerfectPredictions) {
  LabelMap gt;
  for (int i = 0; i < 10; ++i) gt.emplace("t" + std::to_string(i), TrackletLabel::FromValue(i % 3 == 0 ? -1 : i));
  const EvalReport r = EvaluateAccuracy(gt, gt);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.correct, 10u);
  EXPECT_TRUE(r.missing.empty());
}

TEST(EvaluateAccuracy, IllegibleIsAnOrdinaryClass) {
  const LabelMap gt = Labels({{"a", 4}, {"b", -1}, {"c", 10}, {"d", 7}});
  const LabelMap pred = Labels({{"a", 4}, {"b", 12}, {"c", 10}, {"d", 7}});
  const EvalReport r = EvaluateAccuracy(pred, gt);
  EXPECT_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.per_class.at(-1).total, 1u);
  EXPECT_EQ(r.per_class.at(-1).correct, 0u);
}

TEST(EvaluateAccuracy, MissingPredictionCountsAsWrong) {
  const LabelMap gt = Labels({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}});
  const LabelMap pred = Labels({{"a", 1}, {"b", 2}, {"c", 3}, {"e", 5}, {"zzz", 9}});
  const EvalReport r = EvaluateAccuracy(pred, gt);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.8);
  EXPECT_EQ(r.missing, std::vector<std::string>{"d"});
  EXPECT_EQ(r.total, 5u);
}

TEST(EvaluateAccuracy, EmptyGroundTruthIsAnError) {
  EXPECT_THROW(EvaluateAccuracy({}, {}), ValidationError);
}

TEST(EvaluateAccuracy, ChallengeFormatFiles) {
  const LabelMap gt = LoadLabelMap(kFixtures / "protocol" / "gt.json");
  const LabelMap pred = LoadLabelMap(kFixtures / "protocol" / "predictions.json");
  const EvalReport r = EvaluateAccuracy(pred, gt);
  EXPECT_EQ(r.total, 10u);
  EXPECT_EQ(r.correct, 7u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.7);
  EXPECT_EQ(r.missing, std::vector<std::string>{"9"});
}

TEST(DigitConfusion, AllCorrectTwoDigit) {
  const std::vector<Tracklet> ts = {MakeTracklet("a", {NumberFrame("a", 0, 23, 0.9), NumberFrame("a", 1, 23, 0.9)})};
  const DigitConfusion c = ComputeDigitConfusion(ts, Labels({{"a", 23}}));
  EXPECT_EQ(c.at(2, 2), 1.0);
  EXPECT_EQ(c.at(1, 2), 0.0);
  EXPECT_EQ(c.at(2, 1), 0.0);
  EXPECT_EQ(c.at(1, 1), 0.0);
}

TEST(DigitConfusion, HalfTruncated) {
  const std::vector<Tracklet> ts = {MakeTracklet("a", {NumberFrame("a", 0, 23, 0.9), NumberFrame("a", 1, 2, 0.9)})};
  const DigitConfusion c = ComputeDigitConfusion(ts, Labels({{"a", 23}}));
  EXPECT_EQ(c.at(1, 2), 0.5);
  EXPECT_EQ(c.frames, 2u);
}

TEST(DigitConfusion, SkipsIllegibleFramesAndIllegibleTruth) {
  const std::vector<Tracklet> ts = {
      MakeTracklet("a", {NumberFrame("a", 0, 23, 0.9), NumberFrame("a", 1, 2, 0.9, 0.1)}),
      MakeTracklet("b", {NumberFrame("b", 0, 5, 0.9)}),
  };
  const DigitConfusion c = ComputeDigitConfusion(ts, Labels({{"a", 23}, {"b", -1}}));
  EXPECT_EQ(c.frames, 1u);
  EXPECT_THROW(ComputeDigitConfusion(ts, Labels({{"b", -1}})), ValidationError);
}

TEST(DigitConfusion, ReproducesReferenceTable) {
  const auto tracklets = LoadTracklets(kFixtures / "digit_confusion" / "frames.jsonl");
  const LabelMap gt = LoadLabelMap(kFixtures / "digit_confusion" / "gt.json");
  const DigitConfusion c = ComputeDigitConfusion(tracklets, gt);
  EXPECT_EQ(c.frames, 100u);
  EXPECT_EQ(c.cells[0][0], 0.40);
  EXPECT_EQ(c.cells[0][1], 0.07);
  EXPECT_EQ(c.cells[1][0], 0.48);
  EXPECT_EQ(c.cells[1][1], 0.05);
}

TEST(GroundTruthOf, CollectsAttachedLabels) {
  Tracklet a = MakeTracklet("a", {NumberFrame("a", 0, 3, 0.9)});
  a.gt_label = TrackletLabel::Number(3);
  const Tracklet b = MakeTracklet("b", {NumberFrame("b", 0, 3, 0.9)});
  const std::vector<Tracklet> ts = {a, b};
  EXPECT_EQ(GroundTruthOf(ts), Labels({{"a", 3}}));
}

}  // namespace
}  // namespace jnr
