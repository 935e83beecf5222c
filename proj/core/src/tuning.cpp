#include "jnr/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jnr/evaluation.hpp"
#include "jnr/rng.hpp"

namespace jnr {
namespace {

std::vector<Tracklet> Select(std::span<const Tracklet> tracklets, std::span<const std::size_t> indices) {
  std::vector<Tracklet> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(tracklets[i]);
  return out;
}

}  // namespace

HoldoutSplit SplitHoldout(std::size_t count, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("holdout fraction must be in (0, 1)");
  }
  const auto holdout_size = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(count)));
  if (holdout_size == 0 || holdout_size >= count) {
    throw ValidationError("degenerate holdout split: " + std::to_string(holdout_size) + " of " +
                          std::to_string(count) + " items held out");
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));

  HoldoutSplit split;
  split.holdout.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(holdout_size));
  split.tune.assign(order.begin() + static_cast<std::ptrdiff_t>(holdout_size), order.end());
  std::sort(split.holdout.begin(), split.holdout.end());
  std::sort(split.tune.begin(), split.tune.end());
  return split;
}

double PipelineAccuracy(std::span<const Tracklet> tracklets, const PipelineConfig& cfg, unsigned jobs) {
  return EvaluateAccuracy(PredictLabels(tracklets, cfg, jobs), GroundTruthOf(tracklets)).accuracy;
}

GridSearchResult GridSearchFilter(std::span<const Tracklet> corpus, const GridSpec& spec,
                                  const PipelineConfig& base, unsigned jobs) {
  if (spec.k_values.empty() || spec.n_values.empty()) throw ValidationError("grid must be non-empty");

  std::vector<Tracklet> labeled;
  for (const Tracklet& t : corpus) {
    if (t.gt_label) labeled.push_back(t);
  }
  if (labeled.size() < 10) {
    throw ValidationError("grid search needs at least 10 tracklets with ground truth, got " +
                          std::to_string(labeled.size()));
  }

  const HoldoutSplit split = SplitHoldout(labeled.size(), spec.holdout_fraction, spec.seed);
  const std::vector<Tracklet> tune = Select(labeled, split.tune);
  const std::vector<Tracklet> holdout = Select(labeled, split.holdout);

  std::vector<int> ks = spec.k_values;
  std::vector<double> ns = spec.n_values;
  std::sort(ks.begin(), ks.end());
  std::sort(ns.begin(), ns.end());

  GridSearchResult result;
  result.tune_count = tune.size();
  result.holdout_count = holdout.size();
  result.tune_accuracy = -1.0;

  PipelineConfig cfg = base;
  cfg.filter_enabled = true;
  for (int k : ks) {
    for (double n : ns) {
      cfg.filter.rounds = k;
      cfg.filter.threshold = n;
      const double acc = PipelineAccuracy(tune, cfg, jobs);
      result.table.push_back({k, n, acc});
      if (acc > result.tune_accuracy) {
        result.tune_accuracy = acc;
        result.k = k;
        result.n = n;
      }
    }
  }

  cfg.filter.rounds = result.k;
  cfg.filter.threshold = result.n;
  result.holdout_accuracy = PipelineAccuracy(holdout, cfg, jobs);
  return result;
}

std::vector<AblationRow> RunAblation(std::span<const Tracklet> corpus, const PipelineConfig& base, unsigned jobs) {
  PipelineConfig heuristic = base;
  heuristic.method = Method::kHeuristic;
  heuristic.filter_enabled = true;
  heuristic.heuristic.use_bias = true;
  heuristic.heuristic.use_threshold = true;

  PipelineConfig heuristic_no_bias = heuristic;
  heuristic_no_bias.heuristic.use_bias = false;

  PipelineConfig heuristic_no_bias_no_threshold = heuristic_no_bias;
  heuristic_no_bias_no_threshold.heuristic.use_threshold = false;

  PipelineConfig heuristic_no_filter = heuristic;
  heuristic_no_filter.filter_enabled = false;

  PipelineConfig probabilistic = heuristic;
  probabilistic.method = Method::kProbabilistic;
  probabilistic.prior_bias = true;

  PipelineConfig probabilistic_no_bias = probabilistic;
  probabilistic_no_bias.prior_bias = false;

  const std::vector<std::pair<std::string, PipelineConfig>> variants = {
      {"heuristic full", heuristic},
      {"heuristic no-bias", heuristic_no_bias},
      {"heuristic no-bias no-threshold", heuristic_no_bias_no_threshold},
      {"heuristic no-filtering", heuristic_no_filter},
      {"probabilistic full", probabilistic},
      {"probabilistic no-bias", probabilistic_no_bias},
  };

  std::vector<AblationRow> rows;
  for (const auto& [name, cfg] : variants) rows.push_back({name, PipelineAccuracy(corpus, cfg, jobs), 0.0});
  for (AblationRow& row : rows) row.delta = row.accuracy - rows.front().accuracy;
  return rows;
}

}  // namespace jnr
