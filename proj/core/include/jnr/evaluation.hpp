#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jnr/consolidate.hpp"
#include "jnr/types.hpp"

namespace jnr {

/// Frame-level confusion of digit counts. cells[pred][truth], index 0 is
/// "2 digits" and index 1 is "1 digit"; entries are fractions of `frames`.
struct DigitConfusion {
  std::array<std::array<double, 2>, 2> cells{};
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::size_t frames = 0;

  double at(int predicted_digits, int true_digits) const {
    return cells[predicted_digits == 2 ? 0 : 1][true_digits == 2 ? 0 : 1];
  }
};

struct ClassCount {
  std::size_t total = 0;
  std::size_t correct = 0;
};

struct EvalReport {
  double accuracy = 0.0;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::vector<std::string> missing;        // ground-truth ids without a prediction
  std::map<int, ClassCount> per_class;     // keyed by ground-truth label value
  std::optional<DigitConfusion> digit_confusion;
};

/// Exact-match accuracy over every ground-truth tracklet. Illegible (-1) is
/// an ordinary class. Missing predictions count as wrong.
EvalReport EvaluateAccuracy(const LabelMap& predictions, const LabelMap& ground_truth);

/// Counts frames of tracklets whose ground truth is a number, that pass the
/// legibility gate and whose prediction has one or two digits.
DigitConfusion ComputeDigitConfusion(std::span<const Tracklet> tracklets, const LabelMap& ground_truth,
                                     double legibility_threshold = kDefaultLegibilityThreshold);

/// Ground-truth labels carried by the tracklets themselves.
LabelMap GroundTruthOf(std::span<const Tracklet> tracklets);

}  // namespace jnr
