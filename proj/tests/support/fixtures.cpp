#include "fixtures.hpp"

#include <algorithm>
#include <cstdio>

namespace jnr::testing {

CharDist Dist(std::size_t target, double mass, int other) {
  CharDist d{};
  if (other >= 0) {
    d[static_cast<std::size_t>(other)] = 1.0 - mass;
  } else {
    for (std::size_t k = 0; k < kNumChars; ++k) d[k] = (1.0 - mass) / 10.0;
  }
  d[target] = mass;
  return d;
}

FramePrediction Frame(const std::string& id, std::uint64_t idx, const CharDist& first, const CharDist& second,
                      double legibility) {
  FramePrediction f;
  f.tracklet_id = id;
  f.frame_idx = idx;
  f.bbox = {10.0, 20.0, 40.0, 100.0};
  f.legibility = legibility;
  f.char_dists = {first, second};
  f.confidence = *std::max_element(first.begin(), first.end()) * *std::max_element(second.begin(), second.end());
  f.predicted = DecodeArgmax(f.char_dists);
  return f;
}

FramePrediction NumberFrame(const std::string& id, std::uint64_t idx, int number, double confidence,
                            double legibility) {
  const std::size_t first = static_cast<std::size_t>(number >= 10 ? number / 10 : number);
  const std::size_t second = number >= 10 ? static_cast<std::size_t>(number % 10) : kEos;
  FramePrediction f = Frame(id, idx, Dist(first), Dist(second), legibility);
  f.confidence = confidence;
  return f;
}

Tracklet MakeTracklet(const std::string& id, std::vector<FramePrediction> frames) {
  Tracklet t;
  t.tracklet_id = id;
  t.frames = std::move(frames);
  return t;
}

// One-dimensional embeddings. The subject cluster is 40 points evenly spaced
// on [-1, 1] (radial z-scores stay below 1.8 in every round).
//
// Type A: three legible distractors at 1.97, 2.36, 2.83 voting a smaller
// number with full confidence against two subject frames at 0.5 each. With
// radial z-scores each distractor sits near z = 3.75 only once the ones
// beyond it are gone, so N = 3.5 peels one per round and needs K >= 3;
// N >= 4 removes nothing. The label is right only if all three go.
//
// Type B: the subject cluster is illegible apart from two legible frames at
// 2.09 (z = 3.25). N <= 3 discards them and the tracklet turns illegible.
std::vector<Tracklet> PlantedGridCorpus(std::size_t per_type) {
  constexpr std::size_t kCluster = 40;
  auto cluster_x = [](std::size_t i) { return -1.0 + 2.0 * static_cast<double>(i) / (kCluster - 1); };

  std::vector<Tracklet> out;
  for (std::size_t i = 0; i < per_type; ++i) {
    const int truth = 80 + static_cast<int>(i % 10);
    const int distractor = 20 + static_cast<int>(i % 10);
    char id[32];

    std::snprintf(id, sizeof(id), "a%03zu", i);
    Tracklet a;
    a.tracklet_id = id;
    a.embeddings = EmbeddingMatrix(0, 1);
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < kCluster; ++k) {
      const bool legible = k == 10 || k == 30;
      a.frames.push_back(NumberFrame(id, idx++, truth, 0.5, legible ? 0.9 : 0.1));
      a.embeddings->append_row(std::vector<float>{static_cast<float>(cluster_x(k))});
    }
    for (float x : {1.97f, 2.36f, 2.83f}) {
      a.frames.push_back(NumberFrame(id, idx++, distractor, 1.0, 0.9));
      a.embeddings->append_row(std::vector<float>{x});
    }
    for (std::size_t f = 0; f < a.frames.size(); ++f) a.frames[f].embedding_ref = f;
    a.gt_label = TrackletLabel::Number(truth);
    out.push_back(std::move(a));

    std::snprintf(id, sizeof(id), "b%03zu", i);
    Tracklet b;
    b.tracklet_id = id;
    b.embeddings = EmbeddingMatrix(0, 1);
    idx = 0;
    for (std::size_t k = 0; k < kCluster; ++k) {
      b.frames.push_back(NumberFrame(id, idx++, truth, 0.5, 0.1));
      b.embeddings->append_row(std::vector<float>{static_cast<float>(cluster_x(k))});
    }
    for (int rep = 0; rep < 2; ++rep) {
      b.frames.push_back(NumberFrame(id, idx++, truth, 0.9, 0.9));
      b.embeddings->append_row(std::vector<float>{2.09f});
    }
    for (std::size_t f = 0; f < b.frames.size(); ++f) b.frames[f].embedding_ref = f;
    b.gt_label = TrackletLabel::Number(truth);
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end(),
            [](const Tracklet& x, const Tracklet& y) { return x.tracklet_id < y.tracklet_id; });
  return out;
}

}  // namespace jnr::testing
