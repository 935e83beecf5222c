#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jnr {

// Character alphabet of one recognizer output position: digits '0'..'9'
// occupy indices 0..9, end-of-string is index 10.
inline constexpr std::size_t kNumChars = 11;
inline constexpr std::size_t kEos = 10;
inline constexpr std::size_t kNumPositions = 2;

using CharDist = std::array<double, kNumChars>;

// Tolerance on |sum(dist) - 1| for stored distributions.
inline constexpr double kDistSumTolerance = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input bytes (bad JSON, bad magic, truncated payloads).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Keypoints = std::map<std::string, Point2>;

/// A tracklet-level jersey number: 0..99, or illegible (serialized as -1).
class TrackletLabel {
 public:
  static constexpr int kIllegibleValue = -1;

  constexpr TrackletLabel() = default;

  /// Throws ValidationError unless value is -1 or in [0, 99].
  static TrackletLabel FromValue(int value);
  static constexpr TrackletLabel Illegible() { return TrackletLabel{}; }
  static TrackletLabel Number(int number);

  constexpr bool is_illegible() const { return value_ == kIllegibleValue; }
  constexpr int value() const { return value_; }

  friend constexpr bool operator==(TrackletLabel, TrackletLabel) = default;
  friend constexpr auto operator<=>(TrackletLabel, TrackletLabel) = default;

 private:
  explicit constexpr TrackletLabel(int v) : value_(v) {}
  int value_ = kIllegibleValue;
};

using LabelMap = std::map<std::string, TrackletLabel>;

/// Row-major matrix of float32 feature vectors, one row per frame.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim);
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> values);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return rows_ == 0; }

  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<float> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }

  const std::vector<float>& values() const { return values_; }

  void append_row(std::span<const float> r);

  /// Rows selected by index, in the given order.
  EmbeddingMatrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

/// Recognition outputs for one frame of a tracklet.
struct FramePrediction {
  std::string tracklet_id;
  std::uint64_t frame_idx = 0;
  BBox bbox;
  double legibility = 0.0;
  std::array<CharDist, kNumPositions> char_dists{};
  double confidence = 0.0;
  std::string predicted;
  std::optional<Keypoints> keypoints;
  std::optional<std::uint64_t> embedding_ref;

  friend bool operator==(const FramePrediction&, const FramePrediction&) = default;
};

struct Tracklet {
  std::string tracklet_id;
  std::vector<FramePrediction> frames;
  // Rows follow the order of frames that carry an embedding_ref.
  std::optional<EmbeddingMatrix> embeddings;
  std::optional<TrackletLabel> gt_label;

  std::size_t embedded_frame_count() const;

  friend bool operator==(const Tracklet&, const Tracklet&) = default;
};

/// Per-position argmax decode. Ties go to the smaller character index.
/// Returns "" when position 1 decodes to end-of-string.
std::string DecodeArgmax(const std::array<CharDist, kNumPositions>& dists);

std::size_t ArgmaxChar(std::span<const double> scores);

/// Numeric value of a 1-2 digit string ("07" -> 7). Throws on other input.
int ParseNumber(std::string_view digits);

}  // namespace jnr
