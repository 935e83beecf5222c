#include "jnr/consolidate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "jnr/evaluation.hpp"
#include "jnr/rng.hpp"
#include "jnr/synthgen.hpp"
#include "oracles.hpp"

namespace jnr {
namespace {

using testing::Dist;
using testing::Frame;
using testing::MakeTracklet;
using testing::NumberFrame;

std::vector<std::size_t> All(const Tracklet& t) {
  std::vector<std::size_t> v(t.frames.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

Prior Uniform() {
  Prior p;
  for (std::size_t k = 0; k < kEos; ++k) p.pos1[k] = 0.1;
  p.pos2.fill(1.0 / kNumChars);
  return p;
}

const CalibrationModel kIdentity{};

// Random tracklet whose frames carry noisy, full-support distributions.
Tracklet RandomTracklet(Rng& rng, std::size_t frames) {
  std::vector<FramePrediction> out;
  const int truth = rng.Bernoulli(0.4) ? static_cast<int>(rng.Index(10)) : 10 + static_cast<int>(rng.Index(90));
  for (std::size_t i = 0; i < frames; ++i) {
    std::array<CharDist, 2> d{};
    for (auto& dist : d) {
      double sum = 0.0;
      for (double& v : dist) {
        v = std::exp(rng.Normal(0.0, 1.5));
        sum += v;
      }
      for (double& v : dist) v /= sum;
    }
    const auto targets = PositionTargets(TrackletLabel::Number(truth));
    d[0][targets[0]] += 0.5;
    d[1][targets[1]] += 0.5;
    for (auto& dist : d) {
      for (double& v : dist) v /= 1.5;
    }
    out.push_back(Frame("r", i, d[0], d[1]));
  }
  return MakeTracklet("r", out);
}

TEST(GateLegible, Examples) {
  Tracklet t = MakeTracklet("t", {NumberFrame("t", 0, 5, 0.9, 0.9), NumberFrame("t", 1, 5, 0.9, 0.2),
                                  NumberFrame("t", 2, 5, 0.9, 0.6)});
  EXPECT_EQ(GateLegible(t, 0.5), (LegibleSet{0, 2}));

  for (auto& f : t.frames) f.legibility = 0.0;
  EXPECT_TRUE(GateLegible(t, 0.5).empty());

  Tracklet two = MakeTracklet("u", {NumberFrame("u", 0, 5, 0.9, 0.9), NumberFrame("u", 1, 5, 0.9, 0.9)});
  const std::vector<std::size_t> kept = {1};
  EXPECT_EQ(GateLegible(two, 0.5, kept), (LegibleSet{1}));
}

TEST(GateLegible, ThresholdIsInclusive) {
  const Tracklet t = MakeTracklet("t", {NumberFrame("t", 0, 5, 0.9, 0.5)});
  EXPECT_EQ(GateLegible(t, 0.5), (LegibleSet{0}));
}

TEST(LabelFromChars, Decoding) {
  EXPECT_EQ(LabelFromChars(4, kEos), TrackletLabel::Number(4));
  EXPECT_EQ(LabelFromChars(4, 2), TrackletLabel::Number(42));
  EXPECT_EQ(LabelFromChars(0, 7), TrackletLabel::Number(7));
  EXPECT_EQ(LabelFromChars(0, kEos), TrackletLabel::Number(0));
  EXPECT_TRUE(LabelFromChars(kEos, 3).is_illegible());
}

TEST(Prior, Shapes) {
  const Prior bias = Prior::SingleDigitBias(0.39);
  EXPECT_EQ(bias.pos1[kEos], 0.0);
  EXPECT_DOUBLE_EQ(bias.pos2[kEos], 0.39);
  EXPECT_DOUBLE_EQ(bias.pos2[3], 0.061);
  EXPECT_NO_THROW(CheckPrior(bias));
  const Prior flat = Prior::NoBias();
  EXPECT_DOUBLE_EQ(flat.pos2[kEos], 1.0 / 11.0);
  EXPECT_NO_THROW(CheckPrior(flat));
  EXPECT_THROW(Prior::SingleDigitBias(1.5), ValidationError);
}

TEST(ConsolidateProbabilistic, EmptyIsIllegible) {
  const Tracklet t = MakeTracklet("t", {NumberFrame("t", 0, 4, 0.9)});
  EXPECT_TRUE(ConsolidateProbabilistic(t, {}, Prior::SingleDigitBias(), kIdentity).is_illegible());
}

TEST(ConsolidateProbabilistic, SinglePointMass) {
  const Tracklet t = MakeTracklet("t", {Frame("t", 0, Dist(4), Dist(kEos))});
  EXPECT_EQ(ConsolidateProbabilistic(t, All(t), Prior::SingleDigitBias(), kIdentity), TrackletLabel::Number(4));
}

TEST(ConsolidateProbabilistic, HandComputedLogSums) {
  const Tracklet t =
      MakeTracklet("t", {Frame("t", 0, Dist(4, 0.7, 1), Dist(kEos, 0.9)), Frame("t", 1, Dist(4, 0.6, 1), Dist(kEos, 0.9))});
  const double four = std::log(0.7) + std::log(0.6) + 2 * std::log(0.1);
  const double one = std::log(0.3) + std::log(0.4) + 2 * std::log(0.1);
  ASSERT_GT(four, one);
  EXPECT_EQ(ConsolidateProbabilistic(t, All(t), Prior::SingleDigitBias(), kIdentity, PriorMode::kPerFrame),
            TrackletLabel::Number(4));
  EXPECT_EQ(oracle::BruteForceProbabilistic(t, All(t), Prior::SingleDigitBias(), PriorMode::kPerFrame),
            TrackletLabel::Number(4));
}

TEST(ConsolidateProbabilistic, PriorShiftsNearTieTowardEndOfString) {
  // Position 2 leans slightly to '2' (0.52 vs 0.48). Without the bias the
  // likelihood wins; with it, log(0.39) - log(0.061) outweighs 3 * log(0.52/0.48).
  std::vector<FramePrediction> frames;
  for (std::uint64_t i = 0; i < 3; ++i) frames.push_back(Frame("t", i, Dist(4), Dist(2, 0.52, kEos)));
  const Tracklet t = MakeTracklet("t", frames);
  const Prior bias = Prior::SingleDigitBias(0.39);

  for (PriorMode mode : {PriorMode::kOnce, PriorMode::kPerFrame}) {
    EXPECT_EQ(ConsolidateProbabilistic(t, All(t), bias, kIdentity, mode), TrackletLabel::Number(4));
    EXPECT_EQ(oracle::BruteForceProbabilistic(t, All(t), bias, mode), TrackletLabel::Number(4));
    EXPECT_EQ(ConsolidateProbabilistic(t, All(t), Uniform(), kIdentity, mode), TrackletLabel::Number(42));
  }
}

TEST(ConsolidateProbabilistic, OnceAndPerFrameDifferWhenPriorIsRepeated) {
  // 10 frames at 0.6 / 0.4 in favor of '2': per-frame prior adds 10 * 1.855,
  // which beats 10 * log(1.5) = 4.05; a single prior term does not.
  std::vector<FramePrediction> frames;
  for (std::uint64_t i = 0; i < 10; ++i) frames.push_back(Frame("t", i, Dist(4), Dist(2, 0.6, kEos)));
  const Tracklet t = MakeTracklet("t", frames);
  const Prior bias = Prior::SingleDigitBias(0.39);
  EXPECT_EQ(ConsolidateProbabilistic(t, All(t), bias, kIdentity, PriorMode::kOnce), TrackletLabel::Number(42));
  EXPECT_EQ(ConsolidateProbabilistic(t, All(t), bias, kIdentity, PriorMode::kPerFrame), TrackletLabel::Number(4));
}

TEST(ConsolidateProbabilistic, TieGoesToSmallerIndex) {
  CharDist even{};
  even[3] = 0.5;
  even[7] = 0.5;
  const Tracklet t = MakeTracklet("t", {Frame("t", 0, even, Dist(kEos))});
  EXPECT_EQ(ConsolidateProbabilistic(t, All(t), Uniform(), kIdentity), TrackletLabel::Number(3));
}

TEST(ConsolidateProbabilistic, MatchesBruteForceOnRandomTracklets) {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const Tracklet t = RandomTracklet(rng, 1 + rng.Index(12));
    for (const Prior& prior : {Prior::SingleDigitBias(), Prior::NoBias()}) {
      for (PriorMode mode : {PriorMode::kOnce, PriorMode::kPerFrame}) {
        EXPECT_EQ(ConsolidateProbabilistic(t, All(t), prior, kIdentity, mode),
                  oracle::BruteForceProbabilistic(t, All(t), prior, mode));
      }
    }
  }
}

TEST(ConsolidateProbabilistic, SingleFrameReproducesArgmaxDecode) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Tracklet t = RandomTracklet(rng, 1);
    const auto& d = t.frames[0].char_dists;
    // The prior rules out end-of-string in position 1.
    if (ArgmaxChar(d[0]) == kEos) continue;
    EXPECT_EQ(ConsolidateProbabilistic(t, All(t), Uniform(), kIdentity, PriorMode::kOnce),
              LabelFromChars(ArgmaxChar(d[0]), ArgmaxChar(d[1])));
  }
}

TEST(ConsolidateProbabilistic, ScalingBeforeRenormalizationIsInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Tracklet t = RandomTracklet(rng, 5);
    Tracklet scaled = t;
    for (auto& f : scaled.frames) {
      for (auto& dist : f.char_dists) {
        const double c = rng.Uniform(0.5, 3.0);
        double sum = 0.0;
        for (double& v : dist) sum += (v *= c);
        for (double& v : dist) v /= sum;
      }
    }
    EXPECT_EQ(ConsolidateProbabilistic(scaled, All(t), Uniform(), kIdentity, PriorMode::kOnce),
              ConsolidateProbabilistic(t, All(t), Uniform(), kIdentity, PriorMode::kOnce));
  }
}

TEST(Consolidate, PermutationAndDuplicationInvariance) {
  Rng rng(7);
  const HeuristicConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const Tracklet t = RandomTracklet(rng, 2 + rng.Index(8));
    const auto prob = ConsolidateProbabilistic(t, All(t), Prior::SingleDigitBias(), kIdentity);
    const auto heur = ConsolidateHeuristic(t, All(t), cfg);

    Tracklet shuffled = t;
    rng.Shuffle(std::span<FramePrediction>(shuffled.frames));
    EXPECT_EQ(ConsolidateProbabilistic(shuffled, All(t), Prior::SingleDigitBias(), kIdentity), prob);
    EXPECT_EQ(ConsolidateHeuristic(shuffled, All(t), cfg), heur);

    // Doubling the confidence sum can cross the illegibility threshold, so
    // the heuristic side is compared with the threshold off.
    HeuristicConfig no_threshold = cfg;
    no_threshold.use_threshold = false;
    Tracklet doubled = t;
    doubled.frames.insert(doubled.frames.end(), t.frames.begin(), t.frames.end());
    EXPECT_EQ(ConsolidateProbabilistic(doubled, All(doubled), Prior::SingleDigitBias(), kIdentity), prob);
    EXPECT_EQ(ConsolidateHeuristic(doubled, All(doubled), no_threshold), ConsolidateHeuristic(t, All(t), no_threshold));
  }
}

TEST(ConsolidateHeuristic, Unanimous) {
  std::vector<FramePrediction> frames;
  for (std::uint64_t i = 0; i < 4; ++i) frames.push_back(NumberFrame("t", i, 10, 0.9));
  const Tracklet t = MakeTracklet("t", frames);
  EXPECT_EQ(ConsolidateHeuristic(t, All(t), {}), TrackletLabel::Number(10));
}

TEST(ConsolidateHeuristic, ThresholdBoundary) {
  // Sums of binary-exact values so the comparison is exact.
  HeuristicConfig cfg;
  cfg.illegible_threshold = 0.375;
  const Tracklet at = MakeTracklet("t", {NumberFrame("t", 0, 7, 0.25), NumberFrame("t", 1, 7, 0.125)});
  EXPECT_EQ(ConsolidateHeuristic(at, All(at), cfg), TrackletLabel::Number(7));
  const Tracklet below = MakeTracklet("t", {NumberFrame("t", 0, 7, 0.25), NumberFrame("t", 1, 7, 0.125 - 1e-9)});
  EXPECT_TRUE(ConsolidateHeuristic(below, All(below), cfg).is_illegible());
  cfg.use_threshold = false;
  EXPECT_EQ(ConsolidateHeuristic(below, All(below), cfg), TrackletLabel::Number(7));
}

TEST(ConsolidateHeuristic, OneDigitDownWeightInMixedTracklets) {
  std::vector<FramePrediction> frames;
  for (std::uint64_t i = 0; i < 3; ++i) frames.push_back(NumberFrame("t", i, 4, 0.5));
  for (std::uint64_t i = 3; i < 5; ++i) frames.push_back(NumberFrame("t", i, 44, 0.6));
  const Tracklet t = MakeTracklet("t", frames);
  // "4": 3 * 0.5 * 0.5 = 0.75, "44": 1.2
  HeuristicConfig cfg;
  EXPECT_EQ(ConsolidateHeuristic(t, All(t), cfg), TrackletLabel::Number(44));
  EXPECT_EQ(oracle::NaiveHeuristic(t, All(t), cfg), TrackletLabel::Number(44));
  // Without the bias "4" has 1.5 > 1.2.
  cfg.use_bias = false;
  EXPECT_EQ(ConsolidateHeuristic(t, All(t), cfg), TrackletLabel::Number(4));
}

TEST(ConsolidateHeuristic, PureOneDigitTrackletIsNotPenalized) {
  const Tracklet t = MakeTracklet("t", {NumberFrame("t", 0, 4, 0.5), NumberFrame("t", 1, 7, 0.4)});
  EXPECT_EQ(ConsolidateHeuristic(t, All(t), {}), TrackletLabel::Number(4));
}

TEST(ConsolidateHeuristic, TieGoesToSmallerNumber) {
  const Tracklet t = MakeTracklet("t", {NumberFrame("t", 0, 23, 0.5), NumberFrame("t", 1, 17, 0.5)});
  EXPECT_EQ(ConsolidateHeuristic(t, All(t), {}), TrackletLabel::Number(17));
}

TEST(ConsolidateHeuristic, EmptyPredictionsCastNoVote) {
  FramePrediction blank = Frame("t", 0, Dist(kEos), Dist(kEos));
  ASSERT_EQ(blank.predicted, "");
  blank.confidence = 0.9;
  const Tracklet only_blank = MakeTracklet("t", {blank});
  EXPECT_TRUE(ConsolidateHeuristic(only_blank, All(only_blank), {}).is_illegible());
  EXPECT_TRUE(ConsolidateHeuristic(only_blank, {}, {}).is_illegible());

  const Tracklet mixed = MakeTracklet("t", {blank, NumberFrame("t", 1, 8, 0.1)});
  EXPECT_EQ(ConsolidateHeuristic(mixed, All(mixed), {}), TrackletLabel::Number(8));
}

TEST(ConsolidateHeuristic, MatchesNaiveOnRandomTracklets) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<FramePrediction> frames;
    const std::size_t n = 1 + rng.Index(10);
    for (std::size_t i = 0; i < n; ++i) {
      const int number = rng.Bernoulli(0.5) ? static_cast<int>(rng.Index(4)) : 10 + static_cast<int>(rng.Index(3));
      frames.push_back(NumberFrame("t", i, number, rng.Bernoulli(0.2) ? 0.25 : rng.Uniform(0.0, 0.3)));
    }
    const Tracklet t = MakeTracklet("t", frames);
    HeuristicConfig cfg;
    cfg.use_bias = rng.Bernoulli(0.7);
    cfg.use_threshold = rng.Bernoulli(0.7);
    cfg.illegible_threshold = rng.Uniform(0.0, 1.0);
    EXPECT_EQ(ConsolidateHeuristic(t, All(t), cfg), oracle::NaiveHeuristic(t, All(t), cfg));
  }
}

TEST(ConsolidateHeuristic, RaisingWinnerConfidenceKeepsWinner) {
  Rng rng(9);
  const HeuristicConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FramePrediction> frames;
    const std::size_t n = 2 + rng.Index(8);
    for (std::size_t i = 0; i < n; ++i) {
      frames.push_back(NumberFrame("t", i, rng.Bernoulli(0.5) ? static_cast<int>(rng.Index(3)) : 10 + static_cast<int>(rng.Index(3)),
                                   rng.Uniform(0.05, 0.6)));
    }
    Tracklet t = MakeTracklet("t", frames);
    const TrackletLabel winner = ConsolidateHeuristic(t, All(t), cfg);
    if (winner.is_illegible()) continue;
    for (auto& f : t.frames) {
      if (ParseNumber(f.predicted) == winner.value()) f.confidence += rng.Uniform(0.0, 0.5);
    }
    EXPECT_EQ(ConsolidateHeuristic(t, All(t), cfg), winner);
  }
}

TEST(ConsolidateHeuristic, RejectsBadConfig) {
  EXPECT_THROW(CheckHeuristicConfig({-0.1, 0.5, true, true}), ValidationError);
  EXPECT_THROW(CheckHeuristicConfig({0.35, 0.0, true, true}), ValidationError);
  EXPECT_THROW(CheckHeuristicConfig({0.35, 1.5, true, true}), ValidationError);
}

TEST(DigitConfusionUnderTruncation, TwoDigitTruthReadAsOneDominates) {
  SynthConfig cfg;
  cfg.n_tracklets = 300;
  cfg.eps_trunc = 0.3;
  cfg.legible_frac = 0.5;
  cfg.seed = 31;
  const SynthCorpus corpus = GenerateCorpus(cfg);
  const DigitConfusion c = ComputeDigitConfusion(corpus.tracklets, corpus.ground_truth);
  EXPECT_GT(c.at(1, 2), c.at(2, 1));
}

}  // namespace
}  // namespace jnr
