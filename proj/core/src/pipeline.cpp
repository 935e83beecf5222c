#include "jnr/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

namespace jnr {

void CheckPipelineConfig(const PipelineConfig& cfg) {
  if (cfg.ball) {
    if (!(cfg.ball->mean_w > 0.0) || !(cfg.ball->mean_h > 0.0)) {
      throw ValidationError("ball reference dimensions must be positive");
    }
    if (!(cfg.ball->rel_tolerance >= 0.0 && cfg.ball->rel_tolerance < 1.0)) {
      throw ValidationError("ball tolerance must be in [0, 1)");
    }
  }
  CheckFilterConfig(cfg.filter);
  if (!(cfg.legibility_threshold >= 0.0 && cfg.legibility_threshold <= 1.0)) {
    throw ValidationError("legibility threshold must be in [0, 1]");
  }
  CheckHeuristicConfig(cfg.heuristic);
  CheckPrior(cfg.prior());
  CalibrationModel{cfg.temperature};
}

TrackletResult ProcessTracklet(const Tracklet& tracklet, const PipelineConfig& cfg) {
  TrackletResult result;
  result.tracklet_id = tracklet.tracklet_id;

  if (cfg.ball && !tracklet.frames.empty() && DetectBallTracklet(tracklet, *cfg.ball)) {
    result.is_ball = true;
    result.label = cfg.ball_action == BallAction::kLabelOne ? TrackletLabel::Number(1) : TrackletLabel::Illegible();
    return result;
  }

  if (cfg.filter_enabled) {
    result.kept = FilterTrackletFrames(tracklet, cfg.filter);
  } else {
    result.kept.resize(tracklet.frames.size());
    std::iota(result.kept.begin(), result.kept.end(), std::size_t{0});
  }
  result.legible = GateLegible(tracklet, cfg.legibility_threshold, std::span<const std::size_t>(result.kept));

  if (cfg.method == Method::kHeuristic) {
    result.label = ConsolidateHeuristic(tracklet, result.legible, cfg.heuristic);
  } else {
    result.label = ConsolidateProbabilistic(tracklet, result.legible, cfg.prior(), CalibrationModel(cfg.temperature),
                                            cfg.prior_mode);
  }
  return result;
}

std::vector<TrackletResult> RunPipeline(std::span<const Tracklet> tracklets, const PipelineConfig& cfg,
                                        unsigned jobs) {
  CheckPipelineConfig(cfg);
  std::vector<TrackletResult> results(tracklets.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tracklets.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tracklets.size(); ++i) results[i] = ProcessTracklet(tracklets[i], cfg);
    return results;
  }

  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < tracklets.size(); i += jobs) results[i] = ProcessTracklet(tracklets[i], cfg);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

LabelMap ToLabelMap(std::span<const TrackletResult> results) {
  LabelMap out;
  for (const TrackletResult& r : results) out.emplace(r.tracklet_id, r.label);
  return out;
}

LabelMap PredictLabels(std::span<const Tracklet> tracklets, const PipelineConfig& cfg, unsigned jobs) {
  return ToLabelMap(RunPipeline(tracklets, cfg, jobs));
}

}  // namespace jnr
