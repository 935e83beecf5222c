#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jnr/calibration.hpp"
#include "jnr/types.hpp"

namespace jnr {

/// Character priors per position. Position 1 never ends the string.
struct Prior {
  CharDist pos1{};
  CharDist pos2{};

  /// Uniform digits; end-of-string at position 2 gets mass p_single.
  static Prior SingleDigitBias(double p_single = 0.39);
  /// Uniform digits at position 1, uniform over all 11 characters at position 2.
  static Prior NoBias();
};

void CheckPrior(const Prior& prior);

enum class PriorMode {
  kPerFrame,  // prior log-probability added once per legible frame
  kOnce,      // prior added once per tracklet
};

struct HeuristicConfig {
  double illegible_threshold = 0.35;  // tau
  double one_digit_weight = 0.5;      // w
  bool use_bias = true;
  bool use_threshold = true;
};

void CheckHeuristicConfig(const HeuristicConfig& cfg);

/// Positions of frames passing the legibility gate.
using LegibleSet = std::vector<std::size_t>;

inline constexpr double kDefaultLegibilityThreshold = 0.5;

/// Frames with legibility >= threshold, restricted to `kept` when given.
LegibleSet GateLegible(const Tracklet& tracklet, double threshold = kDefaultLegibilityThreshold,
                       std::optional<std::span<const std::size_t>> kept = std::nullopt);

/// Label from decoded character indices; position 1 end-of-string is illegible.
TrackletLabel LabelFromChars(std::size_t first, std::size_t second);

/// Per-position argmax of summed tempered log-likelihoods plus log prior.
TrackletLabel ConsolidateProbabilistic(const Tracklet& tracklet, std::span<const std::size_t> legible,
                                       const Prior& prior, const CalibrationModel& calibration,
                                       PriorMode mode = PriorMode::kPerFrame);

/// Confidence-weighted vote over predicted strings of the legible frames.
TrackletLabel ConsolidateHeuristic(const Tracklet& tracklet, std::span<const std::size_t> legible,
                                   const HeuristicConfig& cfg);

}  // namespace jnr
