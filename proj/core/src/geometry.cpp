#include "jnr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace jnr {
namespace {

const Point2& Joint(const Keypoints& keypoints, const char* name) {
  auto it = keypoints.find(name);
  if (it == keypoints.end()) throw ValidationError(std::string("missing joint \"") + name + "\"");
  if (!std::isfinite(it->second.x) || !std::isfinite(it->second.y)) {
    throw ValidationError(std::string("joint \"") + name + "\" has non-finite coordinates");
  }
  return it->second;
}

void CheckReference(const BallReference& ref) {
  if (!(ref.mean_w > 0.0) || !(ref.mean_h > 0.0)) {
    throw ValidationError("ball reference dimensions must be positive");
  }
  if (!(ref.rel_tolerance >= 0.0 && ref.rel_tolerance < 1.0)) {
    throw ValidationError("ball rel_tolerance must be in [0, 1)");
  }
}

bool InBand(double value, double mean, double tol) {
  return value >= mean * (1.0 - tol) && value <= mean * (1.0 + tol);
}

}  // namespace

TorsoBox TorsoBounds(const Keypoints& keypoints, int pad) {
  const Point2* joints[] = {&Joint(keypoints, kLeftShoulder), &Joint(keypoints, kRightShoulder),
                            &Joint(keypoints, kLeftHip), &Joint(keypoints, kRightHip)};
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Point2* p : joints) {
    min_x = std::min(min_x, p->x);
    max_x = std::max(max_x, p->x);
    min_y = std::min(min_y, p->y);
    max_y = std::max(max_y, p->y);
  }
  return {static_cast<int>(std::floor(min_x)) - pad, static_cast<int>(std::floor(min_y)),
          static_cast<int>(std::ceil(max_x)) + pad, static_cast<int>(std::ceil(max_y)) + pad};
}

TorsoBox TorsoCrop(const Keypoints& keypoints, ImageSize image, int pad) {
  if (pad < 0) throw ValidationError("torso pad must be non-negative");
  TorsoBox box = TorsoBounds(keypoints, pad);
  box.x0 = std::clamp(box.x0, 0, image.width);
  box.x1 = std::clamp(box.x1, 0, image.width);
  box.y0 = std::clamp(box.y0, 0, image.height);
  box.y1 = std::clamp(box.y1, 0, image.height);
  if (box.x0 >= box.x1 || box.y0 >= box.y1) throw ValidationError("degenerate crop");
  return box;
}

double Median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of empty list");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

bool DetectBallTracklet(std::span<const BboxSize> boxes, const BallReference& ref) {
  if (boxes.empty()) throw ValidationError("ball detection needs at least one bounding box");
  CheckReference(ref);
  std::vector<double> ws;
  std::vector<double> hs;
  ws.reserve(boxes.size());
  hs.reserve(boxes.size());
  for (const BboxSize& b : boxes) {
    ws.push_back(b.w);
    hs.push_back(b.h);
  }
  return InBand(Median(ws), ref.mean_w, ref.rel_tolerance) && InBand(Median(hs), ref.mean_h, ref.rel_tolerance);
}

bool DetectBallTracklet(const Tracklet& tracklet, const BallReference& ref) {
  std::vector<BboxSize> boxes;
  boxes.reserve(tracklet.frames.size());
  for (const FramePrediction& f : tracklet.frames) boxes.push_back({f.bbox.w, f.bbox.h});
  return DetectBallTracklet(boxes, ref);
}

}  // namespace jnr
