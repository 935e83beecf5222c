#pragma once

#include <span>
#include <string>

#include "jnr/types.hpp"

namespace jnr {

inline constexpr const char* kLeftShoulder = "left_shoulder";
inline constexpr const char* kRightShoulder = "right_shoulder";
inline constexpr const char* kLeftHip = "left_hip";
inline constexpr const char* kRightHip = "right_hip";

inline constexpr int kDefaultTorsoPad = 5;

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct TorsoBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  friend bool operator==(const TorsoBox&, const TorsoBox&) = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Torso rectangle spanned by the shoulder and hip joints, padded on the
// left, right and bottom (not the top). Non-integer joint coordinates are
// rounded outward.
TorsoBox TorsoBounds(const Keypoints& keypoints, int pad = kDefaultTorsoPad);

// TorsoBounds clamped to the image. Throws ValidationError naming a missing
// joint, or "degenerate crop" when the clamped box has zero area.
TorsoBox TorsoCrop(const Keypoints& keypoints, ImageSize image, int pad = kDefaultTorsoPad);

struct BboxSize {
  double w = 0.0;
  double h = 0.0;
};

/// Mean ball size measured on reference data, with a relative acceptance band.
struct BallReference {
  double mean_w = 0.0;
  double mean_h = 0.0;
  double rel_tolerance = 0.2;
};

/// True when both the median width and the median height of a tracklet's
/// boxes fall inside mean*(1 -/+ rel_tolerance).
bool DetectBallTracklet(std::span<const BboxSize> boxes, const BallReference& ref);
bool DetectBallTracklet(const Tracklet& tracklet, const BallReference& ref);

double Median(std::span<const double> values);

}  // namespace jnr
