#include "jnr/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jnr {
namespace {

void CheckTemperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ValidationError("temperature must be a positive finite number, got " + std::to_string(t));
  }
}

}  // namespace

CalibrationModel::CalibrationModel(double temperature) : temperature_(temperature) {
  CheckTemperature(temperature);
}

CharDist LogApplyTemperature(const CharDist& dist, double temperature) {
  CheckTemperature(temperature);
  CharDist logits{};
  for (std::size_t k = 0; k < kNumChars; ++k) {
    logits[k] = std::log(std::max(dist[k], kProbFloor)) / temperature;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - top);
  const double log_norm = top + std::log(sum);
  for (double& l : logits) l -= log_norm;
  return logits;
}

CharDist ApplyTemperature(const CharDist& dist, double temperature) {
  CharDist out = LogApplyTemperature(dist, temperature);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::array<std::size_t, kNumPositions> PositionTargets(TrackletLabel label) {
  if (label.is_illegible()) throw ValidationError("illegible label has no character targets");
  const int v = label.value();
  if (v < 10) return {static_cast<std::size_t>(v), kEos};
  return {static_cast<std::size_t>(v / 10), static_cast<std::size_t>(v % 10)};
}

double NegativeLogLikelihood(std::span<const LabeledFrame> frames, double temperature) {
  if (frames.empty()) throw ValidationError("negative log-likelihood of an empty frame set");
  double total = 0.0;
  for (const LabeledFrame& f : frames) {
    for (std::size_t j = 0; j < kNumPositions; ++j) {
      if (f.targets[j] >= kNumChars) throw ValidationError("character target out of range");
      total -= LogApplyTemperature(f.dists[j], temperature)[f.targets[j]];
    }
  }
  return total / static_cast<double>(frames.size() * kNumPositions);
}

CalibrationModel FitTemperature(std::span<const LabeledFrame> frames, const TemperatureSearch& search) {
  if (frames.empty()) throw ValidationError("cannot fit a temperature without labeled frames");
  CheckTemperature(search.min_temperature);
  CheckTemperature(search.max_temperature);
  if (search.min_temperature >= search.max_temperature) throw ValidationError("empty temperature range");

  auto objective = [&](double log_t) { return NegativeLogLikelihood(frames, std::exp(log_t)); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(search.min_temperature);
  double hi = std::log(search.max_temperature);
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = objective(a);
  double fb = objective(b);
  while (hi - lo > search.log_tolerance) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = objective(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = objective(b);
    }
  }

  double best_t = std::exp(0.5 * (lo + hi));
  double best_nll = NegativeLogLikelihood(frames, best_t);
  // Guard against non-unimodal objectives.
  for (double t : {1.0, search.min_temperature, search.max_temperature}) {
    if (t < search.min_temperature || t > search.max_temperature) continue;
    const double nll = NegativeLogLikelihood(frames, t);
    if (nll < best_nll) {
      best_nll = nll;
      best_t = t;
    }
  }
  return CalibrationModel(best_t);
}

}  // namespace jnr
