#include "jnr/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "jnr/geometry.hpp"
#include "jnr/interchange.hpp"
#include "jnr/rng.hpp"
#include "json.hpp"

namespace jnr {
namespace {

constexpr double kImageWidth = 1920.0;
constexpr double kImageHeight = 1080.0;

void RequireProbability(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(std::string("synth config field \"") + field + "\" must be in [0, 1], got " +
                          std::to_string(v));
  }
}

int DrawNumber(Rng& rng, double p_single) {
  if (rng.Bernoulli(p_single)) return static_cast<int>(rng.Index(10));
  return 10 + static_cast<int>(rng.Index(90));
}

CharDist Concentrated(std::size_t target, double kappa) {
  const double mass = 1.0 / (1.0 + 10.0 * std::exp(-kappa));
  CharDist d;
  d.fill((1.0 - mass) / 10.0);
  d[target] = mass;
  return d;
}

std::string TrackletId(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%05zu", i);
  return buf;
}

struct TrackletDraft {
  Tracklet tracklet;
  TrackletProvenance provenance;
};

TrackletDraft GenerateTracklet(const SynthConfig& cfg, std::size_t index, const std::vector<double>& direction) {
  Rng rng(DeriveSeed(cfg.seed, index));
  TrackletDraft draft;
  Tracklet& t = draft.tracklet;
  TrackletProvenance& prov = draft.provenance;
  t.tracklet_id = TrackletId(index);
  prov.tracklet_id = t.tracklet_id;
  prov.is_ball = index >= cfg.n_tracklets;

  prov.true_number = DrawNumber(rng, cfg.p_single);
  do {
    prov.distractor_number = DrawNumber(rng, cfg.p_single);
  } while (prov.distractor_number == prov.true_number);
  prov.subject_illegible = prov.is_ball || rng.Bernoulli(cfg.illegible_tracklet_frac);

  std::vector<double> center(cfg.embed_dim);
  for (double& c : center) c = rng.Normal(0.0, 3.0);

  const double player_w = rng.Uniform(40.0, 70.0);
  const double player_h = player_w * rng.Uniform(2.0, 2.6);
  double x = rng.Uniform(0.0, kImageWidth - 100.0);
  double y = rng.Uniform(0.0, kImageHeight - 200.0);

  EmbeddingMatrix embeddings(0, cfg.embed_dim);
  bool any_legible_subject = false;
  for (std::size_t f = 0; f < cfg.frames_per_tracklet; ++f) {
    FramePrediction frame;
    frame.tracklet_id = t.tracklet_id;
    frame.frame_idx = f;

    const bool distractor = !prov.is_ball && rng.Bernoulli(cfg.eps_distract);
    const bool legible =
        !prov.is_ball && (distractor ? rng.Bernoulli(cfg.legible_frac)
                                     : !prov.subject_illegible && rng.Bernoulli(cfg.legible_frac));
    const int shown = distractor ? prov.distractor_number : prov.true_number;

    std::size_t first = 0;
    std::size_t second = kEos;
    double kappa_lo = 0.0;
    double kappa_hi = 1.0;
    if (legible) {
      first = static_cast<std::size_t>(shown >= 10 ? shown / 10 : shown);
      second = shown >= 10 ? static_cast<std::size_t>(shown % 10) : kEos;
      if (shown >= 10 && rng.Bernoulli(cfg.eps_trunc)) {
        second = kEos;
        prov.truncated_frames.push_back(f);
      }
      kappa_lo = 0.5 * cfg.sharpness;
      kappa_hi = 1.5 * cfg.sharpness;
      any_legible_subject = any_legible_subject || !distractor;
    } else {
      first = rng.Index(10);
      second = rng.Index(kNumChars);
    }
    frame.char_dists[0] = Concentrated(first, rng.Uniform(kappa_lo, kappa_hi));
    frame.char_dists[1] = Concentrated(second, rng.Uniform(kappa_lo, kappa_hi));
    frame.legibility = legible ? rng.Uniform(0.6, 1.0) : rng.Uniform(0.0, 0.4);
    frame.confidence = *std::max_element(frame.char_dists[0].begin(), frame.char_dists[0].end()) *
                       *std::max_element(frame.char_dists[1].begin(), frame.char_dists[1].end());
    frame.predicted = DecodeArgmax(frame.char_dists);

    x = std::clamp(x + rng.Normal(0.0, 3.0), 0.0, kImageWidth - 100.0);
    y = std::clamp(y + rng.Normal(0.0, 2.0), 0.0, kImageHeight - 200.0);
    if (prov.is_ball) {
      frame.bbox = {x, y, cfg.ball_w * rng.Uniform(0.95, 1.05), cfg.ball_h * rng.Uniform(0.95, 1.05)};
    } else {
      const double w = player_w * rng.Uniform(0.97, 1.03);
      const double h = player_h * rng.Uniform(0.97, 1.03);
      frame.bbox = {x, y, w, h};
      // Joint coordinates are relative to the player crop.
      Keypoints kp;
      kp[kLeftShoulder] = {0.7 * w + rng.Normal(0.0, 1.0), 0.22 * h + rng.Normal(0.0, 1.0)};
      kp[kRightShoulder] = {0.3 * w + rng.Normal(0.0, 1.0), 0.22 * h + rng.Normal(0.0, 1.0)};
      kp[kLeftHip] = {0.65 * w + rng.Normal(0.0, 1.0), 0.55 * h + rng.Normal(0.0, 1.0)};
      kp[kRightHip] = {0.35 * w + rng.Normal(0.0, 1.0), 0.55 * h + rng.Normal(0.0, 1.0)};
      frame.keypoints = std::move(kp);
    }

    std::vector<float> e(cfg.embed_dim);
    for (std::size_t c = 0; c < cfg.embed_dim; ++c) {
      double v = center[c] + rng.Normal(0.0, cfg.embed_noise);
      if (distractor) v += cfg.cluster_sep * direction[c];
      e[c] = static_cast<float>(v);
    }
    embeddings.append_row(e);
    frame.embedding_ref = 0;  // renumbered after all tracklets exist
    if (distractor) prov.distractor_frames.push_back(f);
    t.frames.push_back(std::move(frame));
  }
  t.embeddings = std::move(embeddings);

  if (prov.is_ball) {
    t.gt_label = TrackletLabel::Number(1);
  } else if (!any_legible_subject) {
    t.gt_label = TrackletLabel::Illegible();
  } else {
    t.gt_label = TrackletLabel::Number(prov.true_number);
  }
  return draft;
}

}  // namespace

void CheckSynthConfig(const SynthConfig& cfg) {
  RequireProbability(cfg.p_single, "p_single");
  RequireProbability(cfg.legible_frac, "legible_frac");
  RequireProbability(cfg.illegible_tracklet_frac, "illegible_tracklet_frac");
  RequireProbability(cfg.eps_trunc, "eps_trunc");
  RequireProbability(cfg.eps_distract, "eps_distract");
  if (cfg.frames_per_tracklet == 0) throw ValidationError("synth config field \"frames_per_tracklet\" must be >= 1");
  if (cfg.embed_dim == 0) throw ValidationError("synth config field \"embed_dim\" must be >= 1");
  if (!(cfg.sharpness > 0.0)) throw ValidationError("synth config field \"sharpness\" must be > 0");
  if (!(cfg.cluster_sep >= 0.0)) throw ValidationError("synth config field \"cluster_sep\" must be >= 0");
  if (!(cfg.embed_noise >= 0.0)) throw ValidationError("synth config field \"embed_noise\" must be >= 0");
  if (!(cfg.ball_w > 0.0) || !(cfg.ball_h > 0.0)) {
    throw ValidationError("synth config fields \"ball_w\"/\"ball_h\" must be > 0");
  }
}

SynthCorpus GenerateCorpus(const SynthConfig& cfg) {
  CheckSynthConfig(cfg);

  Rng corpus_rng(DeriveSeed(cfg.seed, ~std::uint64_t{0}));
  std::vector<double> direction(cfg.embed_dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : direction) {
      c = corpus_rng.Normal();
      norm += c * c;
    }
  } while (norm == 0.0);
  for (double& c : direction) c /= std::sqrt(norm);

  SynthCorpus corpus;
  const std::size_t total = cfg.n_tracklets + cfg.ball_tracklets;
  std::uint64_t next_ref = 0;
  for (std::size_t i = 0; i < total; ++i) {
    TrackletDraft draft = GenerateTracklet(cfg, i, direction);
    for (FramePrediction& f : draft.tracklet.frames) f.embedding_ref = next_ref++;
    corpus.ground_truth.emplace(draft.tracklet.tracklet_id, *draft.tracklet.gt_label);
    corpus.tracklets.push_back(std::move(draft.tracklet));
    corpus.provenance.push_back(std::move(draft.provenance));
  }
  return corpus;
}

void SaveSynthCorpus(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  std::filesystem::create_directories(dir);
  SaveCorpus(dir / "frames.jsonl", dir / "embeddings.bin", corpus.tracklets);
  SaveLabelMap(dir / "gt.json", corpus.ground_truth);

  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const TrackletProvenance& p : corpus.provenance) {
    nlohmann::ordered_json entry;
    entry["true_number"] = p.true_number;
    entry["distractor_number"] = p.distractor_number;
    entry["is_ball"] = p.is_ball;
    entry["subject_illegible"] = p.subject_illegible;
    entry["distractor_frames"] = p.distractor_frames;
    entry["truncated_frames"] = p.truncated_frames;
    prov[p.tracklet_id] = std::move(entry);
  }
  std::ofstream out(dir / "provenance.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "provenance.json").string());
  out << prov.dump(2) << '\n';
}

std::vector<LabeledFrame> GenerateCalibrationFrames(std::size_t count, double true_temperature, std::uint64_t seed,
                                                    double logit_scale) {
  if (!(true_temperature > 0.0)) throw ValidationError("true temperature must be > 0");
  Rng rng(seed);
  std::vector<LabeledFrame> frames(count);
  for (LabeledFrame& frame : frames) {
    for (std::size_t j = 0; j < kNumPositions; ++j) {
      CharDist z{};
      for (double& v : z) v = rng.Normal(0.0, logit_scale);
      const double top = *std::max_element(z.begin(), z.end());

      CharDist p{};
      CharDist stored{};
      double sum_p = 0.0;
      double sum_s = 0.0;
      for (std::size_t k = 0; k < kNumChars; ++k) {
        p[k] = std::exp(z[k] - top);
        stored[k] = std::exp(true_temperature * (z[k] - top));
        sum_p += p[k];
        sum_s += stored[k];
      }
      for (std::size_t k = 0; k < kNumChars; ++k) {
        p[k] /= sum_p;
        stored[k] /= sum_s;
      }

      const double u = rng.Uniform();
      double acc = 0.0;
      std::size_t label = kNumChars - 1;
      for (std::size_t k = 0; k < kNumChars; ++k) {
        acc += p[k];
        if (u < acc) {
          label = k;
          break;
        }
      }
      frame.dists[j] = stored;
      frame.targets[j] = label;
    }
  }
  return frames;
}

}  // namespace jnr
