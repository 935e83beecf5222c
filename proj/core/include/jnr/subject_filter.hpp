#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jnr/types.hpp"

namespace jnr {

enum class FilterMode {
  // z-score of each point's Euclidean distance to the mean, taken over the
  // distances of all surviving points.
  kRadialZScore,
  // Distance to the mean in units of sigma*sqrt(d) under the isotropic fit.
  kIsotropicMahalanobis,
};

struct FilterConfig {
  int rounds = 3;           // K
  double threshold = 3.5;   // N
  FilterMode mode = FilterMode::kRadialZScore;
};

void CheckFilterConfig(const FilterConfig& cfg);

struct GaussianFit {
  std::vector<double> mean;
  double sigma = 0.0;  // pooled per-dimension std, population normalization
};

GaussianFit FitIsotropicGaussian(const EmbeddingMatrix& points);
GaussianFit FitIsotropicGaussian(const EmbeddingMatrix& points, std::span<const std::size_t> subset);

/// Per-point outlier scores of `subset` under `mode`, in subset order.
std::vector<double> OutlierScores(const EmbeddingMatrix& points, std::span<const std::size_t> subset,
                                  FilterMode mode);

/// Iterative main-subject filter. Each round refits on the survivors and
/// drops points scoring above the threshold; stops after `rounds` rounds or
/// once a round drops nothing. At least one point always survives.
/// Returns surviving row indices in ascending order.
std::vector<std::size_t> FilterOutliers(const EmbeddingMatrix& points, const FilterConfig& cfg);

/// Same, for rows given as separate vectors; throws on ragged dimensions.
std::vector<std::size_t> FilterOutliers(std::span<const std::vector<float>> rows, const FilterConfig& cfg);

/// Positions (into tracklet.frames) surviving the filter. Frames without an
/// embedding are always kept.
std::vector<std::size_t> FilterTrackletFrames(const Tracklet& tracklet, const FilterConfig& cfg);

}  // namespace jnr
