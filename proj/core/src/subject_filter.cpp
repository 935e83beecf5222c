#include "jnr/subject_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace jnr {
namespace {

std::vector<double> Distances(const EmbeddingMatrix& points, std::span<const std::size_t> subset,
                              const std::vector<double>& mean) {
  std::vector<double> r(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    auto row = points.row(subset[i]);
    double sq = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double d = static_cast<double>(row[c]) - mean[c];
      sq += d * d;
    }
    r[i] = std::sqrt(sq);
  }
  return r;
}

}  // namespace

void CheckFilterConfig(const FilterConfig& cfg) {
  if (cfg.rounds < 1) throw ValidationError("filter rounds K must be >= 1, got " + std::to_string(cfg.rounds));
  if (!(cfg.threshold > 0.0)) {
    throw ValidationError("filter threshold N must be > 0, got " + std::to_string(cfg.threshold));
  }
}

GaussianFit FitIsotropicGaussian(const EmbeddingMatrix& points, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("cannot fit a Gaussian to zero points");
  const std::size_t dim = points.dim();
  GaussianFit fit;
  fit.mean.assign(dim, 0.0);
  for (std::size_t i : subset) {
    auto row = points.row(i);
    for (std::size_t c = 0; c < dim; ++c) fit.mean[c] += row[c];
  }
  const double m = static_cast<double>(subset.size());
  for (double& v : fit.mean) v /= m;

  double scatter = 0.0;
  for (double r : Distances(points, subset, fit.mean)) scatter += r * r;
  fit.sigma = dim == 0 ? 0.0 : std::sqrt(scatter / (m * static_cast<double>(dim)));
  return fit;
}

GaussianFit FitIsotropicGaussian(const EmbeddingMatrix& points) {
  std::vector<std::size_t> all(points.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return FitIsotropicGaussian(points, all);
}

std::vector<double> OutlierScores(const EmbeddingMatrix& points, std::span<const std::size_t> subset,
                                  FilterMode mode) {
  const GaussianFit fit = FitIsotropicGaussian(points, subset);
  std::vector<double> r = Distances(points, subset, fit.mean);
  std::vector<double> scores(r.size(), 0.0);

  if (mode == FilterMode::kRadialZScore) {
    const double n = static_cast<double>(r.size());
    const double mean_r = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double var = 0.0;
    for (double v : r) var += (v - mean_r) * (v - mean_r);
    const double std_r = std::sqrt(var / n);
    if (std_r > 0.0) {
      for (std::size_t i = 0; i < r.size(); ++i) scores[i] = (r[i] - mean_r) / std_r;
    }
  } else {
    const double scale = fit.sigma * std::sqrt(static_cast<double>(points.dim()));
    if (scale > 0.0) {
      for (std::size_t i = 0; i < r.size(); ++i) scores[i] = r[i] / scale;
    }
  }
  return scores;
}

std::vector<std::size_t> FilterOutliers(const EmbeddingMatrix& points, const FilterConfig& cfg) {
  CheckFilterConfig(cfg);
  if (points.rows() == 0) throw ValidationError("cannot filter an empty embedding set");

  std::vector<std::size_t> kept(points.rows());
  std::iota(kept.begin(), kept.end(), std::size_t{0});

  for (int round = 0; round < cfg.rounds; ++round) {
    const std::vector<double> scores = OutlierScores(points, kept, cfg.mode);
    std::vector<std::size_t> next;
    next.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!(scores[i] > cfg.threshold)) next.push_back(kept[i]);
    }
    if (next.size() == kept.size()) break;
    if (next.empty()) {
      // Keep the single point nearest the current mean.
      const GaussianFit fit = FitIsotropicGaussian(points, kept);
      const std::vector<double> r = Distances(points, kept, fit.mean);
      const auto nearest = std::min_element(r.begin(), r.end()) - r.begin();
      kept = {kept[static_cast<std::size_t>(nearest)]};
      break;
    }
    kept = std::move(next);
  }
  return kept;
}

std::vector<std::size_t> FilterOutliers(std::span<const std::vector<float>> rows, const FilterConfig& cfg) {
  if (rows.empty()) throw ValidationError("cannot filter an empty embedding set");
  EmbeddingMatrix points(0, rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != points.dim()) {
      throw ValidationError("embedding row " + std::to_string(i) + " has dimension " +
                            std::to_string(rows[i].size()) + ", expected " + std::to_string(points.dim()));
    }
    points.append_row(rows[i]);
  }
  return FilterOutliers(points, cfg);
}

std::vector<std::size_t> FilterTrackletFrames(const Tracklet& tracklet, const FilterConfig& cfg) {
  std::vector<std::size_t> embedded;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < tracklet.frames.size(); ++i) {
    (tracklet.frames[i].embedding_ref ? embedded : kept).push_back(i);
  }
  if (embedded.empty()) return kept;
  if (!tracklet.embeddings || tracklet.embeddings->rows() != embedded.size()) {
    throw ValidationError("tracklet \"" + tracklet.tracklet_id +
                          "\": embedding count does not match frames with embedding_ref");
  }
  for (std::size_t row : FilterOutliers(*tracklet.embeddings, cfg)) kept.push_back(embedded[row]);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace jnr
