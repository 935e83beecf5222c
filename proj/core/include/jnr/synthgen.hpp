#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jnr/calibration.hpp"
#include "jnr/types.hpp"

namespace jnr {

// Synthetic tracklet corpus with planted ground truth.
//
// Every frame's character distributions put mass m on a target character and
// spread the rest uniformly; m = 1 / (1 + 10 exp(-kappa)) with kappa drawn
// from sharpness * U(0.5, 1.5), so the argmax is always the target.
struct SynthConfig {
  std::size_t n_tracklets = 100;
  std::size_t frames_per_tracklet = 50;
  double p_single = 0.39;
  double legible_frac = 0.3;           // per-frame probability of a legible frame
  double illegible_tracklet_frac = 0.1;  // subject never shows its number
  double eps_trunc = 0.0;              // 2-digit number seen as its first digit
  double eps_distract = 0.0;           // frame shows another player
  double sharpness = 3.0;
  std::size_t embed_dim = 16;
  double cluster_sep = 10.0;           // distractor offset, in absolute units
  double embed_noise = 1.0;            // per-dimension std of embeddings
  std::size_t ball_tracklets = 0;      // extra tracklets of ball detections
  double ball_w = 20.0;
  double ball_h = 20.0;
  std::uint64_t seed = 0;
};

/// Throws ValidationError naming the offending field.
void CheckSynthConfig(const SynthConfig& cfg);

struct TrackletProvenance {
  std::string tracklet_id;
  int true_number = 0;
  int distractor_number = 0;
  bool is_ball = false;
  bool subject_illegible = false;
  std::vector<std::size_t> distractor_frames;  // positions in Tracklet::frames
  std::vector<std::size_t> truncated_frames;
};

struct SynthCorpus {
  std::vector<Tracklet> tracklets;  // sorted by id, embeddings and gt attached
  LabelMap ground_truth;
  std::vector<TrackletProvenance> provenance;
};

SynthCorpus GenerateCorpus(const SynthConfig& cfg);

/// Writes frames.jsonl, embeddings.bin, gt.json and provenance.json into dir.
void SaveSynthCorpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

/// Labeled frames whose stored distributions equal softmax(t * z) where the
/// labels were sampled from softmax(z); temperature scaling at T = t
/// recovers the sampling distribution. z ~ N(0, logit_scale^2) per entry.
std::vector<LabeledFrame> GenerateCalibrationFrames(std::size_t count, double true_temperature,
                                                    std::uint64_t seed, double logit_scale = 2.0);

}  // namespace jnr
