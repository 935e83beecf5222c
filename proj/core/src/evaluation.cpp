#include "jnr/evaluation.hpp"

namespace jnr {

EvalReport EvaluateAccuracy(const LabelMap& predictions, const LabelMap& ground_truth) {
  if (ground_truth.empty()) throw ValidationError("cannot evaluate against empty ground truth");
  EvalReport report;
  for (const auto& [id, truth] : ground_truth) {
    ClassCount& cls = report.per_class[truth.value()];
    ++cls.total;
    ++report.total;
    auto it = predictions.find(id);
    if (it == predictions.end()) {
      report.missing.push_back(id);
      continue;
    }
    if (it->second == truth) {
      ++cls.correct;
      ++report.correct;
    }
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

DigitConfusion ComputeDigitConfusion(std::span<const Tracklet> tracklets, const LabelMap& ground_truth,
                                     double legibility_threshold) {
  DigitConfusion out;
  for (const Tracklet& t : tracklets) {
    auto it = ground_truth.find(t.tracklet_id);
    if (it == ground_truth.end() || it->second.is_illegible()) continue;
    const int truth_col = it->second.value() >= 10 ? 0 : 1;
    for (const FramePrediction& f : t.frames) {
      if (f.legibility < legibility_threshold) continue;
      if (f.predicted.size() != 1 && f.predicted.size() != 2) continue;
      const int pred_row = f.predicted.size() == 2 ? 0 : 1;
      ++out.counts[pred_row][truth_col];
      ++out.frames;
    }
  }
  if (out.frames == 0) throw ValidationError("no qualifying frames for digit-count confusion");
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      out.cells[r][c] = static_cast<double>(out.counts[r][c]) / static_cast<double>(out.frames);
    }
  }
  return out;
}

LabelMap GroundTruthOf(std::span<const Tracklet> tracklets) {
  LabelMap out;
  for (const Tracklet& t : tracklets) {
    if (t.gt_label) out.emplace(t.tracklet_id, *t.gt_label);
  }
  return out;
}

}  // namespace jnr
