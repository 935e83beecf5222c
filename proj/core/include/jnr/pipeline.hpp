#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jnr/consolidate.hpp"
#include "jnr/geometry.hpp"
#include "jnr/subject_filter.hpp"
#include "jnr/types.hpp"

namespace jnr {

enum class Method { kHeuristic, kProbabilistic };

enum class BallAction {
  kLabelOne,  // matches the SoccerNet annotation, which labels ball tracklets "1"
  kFlag,      // label illegible and report the tracklet as a ball
};

struct PipelineConfig {
  std::optional<BallReference> ball;
  BallAction ball_action = BallAction::kLabelOne;

  bool filter_enabled = true;
  FilterConfig filter;

  double legibility_threshold = kDefaultLegibilityThreshold;

  Method method = Method::kHeuristic;
  HeuristicConfig heuristic;

  bool prior_bias = true;
  double p_single = 0.39;
  PriorMode prior_mode = PriorMode::kPerFrame;
  double temperature = 1.0;

  Prior prior() const { return prior_bias ? Prior::SingleDigitBias(p_single) : Prior::NoBias(); }
};

/// Throws ValidationError on any out-of-range parameter.
void CheckPipelineConfig(const PipelineConfig& cfg);

struct TrackletResult {
  std::string tracklet_id;
  TrackletLabel label;
  bool is_ball = false;
  std::vector<std::size_t> kept;  // frame positions surviving the subject filter
  LegibleSet legible;
};

/// Ball check, subject filter, legibility gate, then consolidation.
TrackletResult ProcessTracklet(const Tracklet& tracklet, const PipelineConfig& cfg);

/// Runs every tracklet; results are in input order regardless of `jobs`.
std::vector<TrackletResult> RunPipeline(std::span<const Tracklet> tracklets, const PipelineConfig& cfg,
                                        unsigned jobs = 1);

LabelMap ToLabelMap(std::span<const TrackletResult> results);

/// Convenience: RunPipeline + ToLabelMap.
LabelMap PredictLabels(std::span<const Tracklet> tracklets, const PipelineConfig& cfg, unsigned jobs = 1);

}  // namespace jnr
