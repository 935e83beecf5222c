#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "jnr/types.hpp"

namespace jnr {

// Zero probabilities are floored here before taking logs.
inline constexpr double kProbFloor = 1e-12;

/// Temperature scaling of per-position character distributions. T = 1 is the
/// identity; T > 1 flattens, T < 1 sharpens.
class CalibrationModel {
 public:
  CalibrationModel() = default;
  explicit CalibrationModel(double temperature);

  double temperature() const { return temperature_; }

 private:
  double temperature_ = 1.0;
};

/// softmax(log(max(p, floor)) / T). Throws ValidationError when T <= 0.
CharDist ApplyTemperature(const CharDist& dist, double temperature);

/// Natural log of ApplyTemperature, computed without leaving log space.
CharDist LogApplyTemperature(const CharDist& dist, double temperature);

/// A frame's two distributions with the ground-truth character per position.
struct LabeledFrame {
  std::array<CharDist, kNumPositions> dists{};
  std::array<std::size_t, kNumPositions> targets{};
};

/// Per-position character targets of a jersey number: 7 -> ('7', EOS),
/// 44 -> ('4', '4'). Throws for an illegible label.
std::array<std::size_t, kNumPositions> PositionTargets(TrackletLabel label);

/// Mean negative log-likelihood over every (frame, position) pair.
double NegativeLogLikelihood(std::span<const LabeledFrame> frames, double temperature);

struct TemperatureSearch {
  double min_temperature = 0.05;
  double max_temperature = 20.0;
  double log_tolerance = 1e-4;
};

/// Golden-section search on log T. The result never scores worse than T = 1.
CalibrationModel FitTemperature(std::span<const LabeledFrame> frames, const TemperatureSearch& search = {});

}  // namespace jnr
