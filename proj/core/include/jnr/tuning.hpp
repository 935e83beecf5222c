#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jnr/pipeline.hpp"
#include "jnr/types.hpp"

namespace jnr {

struct GridSpec {
  std::vector<int> k_values = {1, 2, 3, 4, 5};
  std::vector<double> n_values = {2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  double holdout_fraction = 0.3;
  std::uint64_t seed = 0;
};

struct HoldoutSplit {
  std::vector<std::size_t> tune;
  std::vector<std::size_t> holdout;
};

/// Seeded random split of `count` items; holdout gets round(fraction*count).
/// Throws ValidationError if either side would be empty.
HoldoutSplit SplitHoldout(std::size_t count, double holdout_fraction, std::uint64_t seed);

struct GridPoint {
  int k = 0;
  double n = 0.0;
  double tune_accuracy = 0.0;
};

struct GridSearchResult {
  int k = 0;
  double n = 0.0;
  double tune_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  std::size_t tune_count = 0;
  std::size_t holdout_count = 0;
  std::vector<GridPoint> table;  // every grid point, K-major
};

/// Accuracy of the pipeline against the tracklets' own gt labels.
double PipelineAccuracy(std::span<const Tracklet> tracklets, const PipelineConfig& cfg, unsigned jobs = 1);

/// Tunes subject-filter (K, N) on the tune split with every other setting
/// taken from `base`, then scores the winner on the holdout split. Ties go
/// to the smaller K, then the smaller N. Only tracklets with gt are used.
GridSearchResult GridSearchFilter(std::span<const Tracklet> corpus, const GridSpec& spec,
                                  const PipelineConfig& base, unsigned jobs = 1);

struct AblationRow {
  std::string variant;
  double accuracy = 0.0;
  double delta = 0.0;  // accuracy minus the heuristic-full accuracy
};

/// Heuristic {full, no bias, no bias + no threshold, no filtering} and
/// probabilistic {full, no bias}, all derived from `base`.
std::vector<AblationRow> RunAblation(std::span<const Tracklet> corpus, const PipelineConfig& base,
                                     unsigned jobs = 1);

}  // namespace jnr
