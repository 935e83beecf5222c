#include "jnr/consolidate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace jnr {

Prior Prior::SingleDigitBias(double p_single) {
  if (!(p_single >= 0.0 && p_single <= 1.0)) {
    throw ValidationError("p_single must be in [0, 1], got " + std::to_string(p_single));
  }
  Prior prior;
  for (std::size_t k = 0; k < kEos; ++k) {
    prior.pos1[k] = 0.1;
    prior.pos2[k] = (1.0 - p_single) / 10.0;
  }
  prior.pos1[kEos] = 0.0;
  prior.pos2[kEos] = p_single;
  return prior;
}

Prior Prior::NoBias() {
  Prior prior;
  for (std::size_t k = 0; k < kEos; ++k) prior.pos1[k] = 0.1;
  prior.pos1[kEos] = 0.0;
  prior.pos2.fill(1.0 / static_cast<double>(kNumChars));
  return prior;
}

void CheckPrior(const Prior& prior) {
  for (const CharDist* d : {&prior.pos1, &prior.pos2}) {
    double sum = 0.0;
    for (double p : *d) {
      if (!(p >= 0.0)) throw ValidationError("prior has a negative or NaN entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kDistSumTolerance) throw ValidationError("prior does not sum to 1");
  }
  if (prior.pos1[kEos] != 0.0) throw ValidationError("position 1 prior must give end-of-string zero mass");
}

void CheckHeuristicConfig(const HeuristicConfig& cfg) {
  if (!(cfg.illegible_threshold >= 0.0)) throw ValidationError("illegible threshold must be >= 0");
  if (!(cfg.one_digit_weight > 0.0 && cfg.one_digit_weight <= 1.0)) {
    throw ValidationError("one-digit weight must be in (0, 1]");
  }
}

LegibleSet GateLegible(const Tracklet& tracklet, double threshold, std::optional<std::span<const std::size_t>> kept) {
  std::vector<bool> allowed(tracklet.frames.size(), !kept.has_value());
  if (kept) {
    for (std::size_t i : *kept) {
      if (i < allowed.size()) allowed[i] = true;
    }
  }
  LegibleSet out;
  for (std::size_t i = 0; i < tracklet.frames.size(); ++i) {
    if (allowed[i] && tracklet.frames[i].legibility >= threshold) out.push_back(i);
  }
  return out;
}

TrackletLabel LabelFromChars(std::size_t first, std::size_t second) {
  if (first >= kEos) return TrackletLabel::Illegible();
  if (second >= kEos) return TrackletLabel::Number(static_cast<int>(first));
  return TrackletLabel::Number(static_cast<int>(10 * first + second));
}

TrackletLabel ConsolidateProbabilistic(const Tracklet& tracklet, std::span<const std::size_t> legible,
                                       const Prior& prior, const CalibrationModel& calibration, PriorMode mode) {
  if (legible.empty()) return TrackletLabel::Illegible();

  const double t = calibration.temperature();
  std::array<CharDist, kNumPositions> scores{};
  std::array<CharDist, kNumPositions> log_prior{};
  for (std::size_t k = 0; k < kNumChars; ++k) {
    log_prior[0][k] = std::log(prior.pos1[k]);
    log_prior[1][k] = std::log(prior.pos2[k]);
  }

  for (std::size_t n : legible) {
    const FramePrediction& frame = tracklet.frames.at(n);
    for (std::size_t j = 0; j < kNumPositions; ++j) {
      const CharDist ll = LogApplyTemperature(frame.char_dists[j], t);
      for (std::size_t k = 0; k < kNumChars; ++k) {
        scores[j][k] += ll[k];
        if (mode == PriorMode::kPerFrame) scores[j][k] += log_prior[j][k];
      }
    }
  }
  if (mode == PriorMode::kOnce) {
    for (std::size_t j = 0; j < kNumPositions; ++j) {
      for (std::size_t k = 0; k < kNumChars; ++k) scores[j][k] += log_prior[j][k];
    }
  }
  return LabelFromChars(ArgmaxChar(scores[0]), ArgmaxChar(scores[1]));
}

TrackletLabel ConsolidateHeuristic(const Tracklet& tracklet, std::span<const std::size_t> legible,
                                   const HeuristicConfig& cfg) {
  if (legible.empty()) return TrackletLabel::Illegible();

  double confidence_sum = 0.0;
  bool has_one_digit = false;
  bool has_two_digit = false;
  for (std::size_t n : legible) {
    const FramePrediction& frame = tracklet.frames.at(n);
    confidence_sum += frame.confidence;
    has_one_digit = has_one_digit || frame.predicted.size() == 1;
    has_two_digit = has_two_digit || frame.predicted.size() == 2;
  }
  if (cfg.use_threshold && confidence_sum < cfg.illegible_threshold) return TrackletLabel::Illegible();

  const bool down_weight = cfg.use_bias && has_one_digit && has_two_digit;
  std::map<std::string, double> votes;
  for (std::size_t n : legible) {
    const FramePrediction& frame = tracklet.frames.at(n);
    if (frame.predicted.empty()) continue;
    double weight = frame.confidence;
    if (down_weight && frame.predicted.size() == 1) weight *= cfg.one_digit_weight;
    votes[frame.predicted] += weight;
  }
  if (votes.empty()) return TrackletLabel::Illegible();

  const std::string* best = nullptr;
  double best_weight = -std::numeric_limits<double>::infinity();
  int best_value = 0;
  for (const auto& [predicted, weight] : votes) {
    const int value = ParseNumber(predicted);
    if (weight > best_weight || (weight == best_weight && value < best_value)) {
      best = &predicted;
      best_weight = weight;
      best_value = value;
    }
  }
  return TrackletLabel::Number(ParseNumber(*best));
}

}  // namespace jnr
