#include "jnr/types.hpp"

#include <algorithm>
#include <string>

namespace jnr {

TrackletLabel TrackletLabel::FromValue(int value) {
  if (value == kIllegibleValue) return Illegible();
  return Number(value);
}

TrackletLabel TrackletLabel::Number(int number) {
  if (number < 0 || number > 99) {
    throw ValidationError("jersey number out of range [0, 99]: " + std::to_string(number));
  }
  return TrackletLabel{number};
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (values_.size() != rows_ * dim_) {
    throw ValidationError("embedding matrix size mismatch: " + std::to_string(values_.size()) +
                          " values for " + std::to_string(rows_) + "x" + std::to_string(dim_));
  }
}

void EmbeddingMatrix::append_row(std::span<const float> r) {
  if (rows_ == 0 && values_.empty() && dim_ == 0) dim_ = r.size();
  if (r.size() != dim_) {
    throw ValidationError("embedding row has dimension " + std::to_string(r.size()) +
                          ", expected " + std::to_string(dim_));
  }
  values_.insert(values_.end(), r.begin(), r.end());
  ++rows_;
}

EmbeddingMatrix EmbeddingMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<float> out;
  out.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return EmbeddingMatrix(indices.size(), dim_, std::move(out));
}

std::size_t Tracklet::embedded_frame_count() const {
  return static_cast<std::size_t>(std::count_if(
      frames.begin(), frames.end(), [](const FramePrediction& f) { return f.embedding_ref.has_value(); }));
}

std::size_t ArgmaxChar(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

std::string DecodeArgmax(const std::array<CharDist, kNumPositions>& dists) {
  const std::size_t first = ArgmaxChar(dists[0]);
  if (first == kEos) return {};
  std::string out(1, static_cast<char>('0' + first));
  const std::size_t second = ArgmaxChar(dists[1]);
  if (second != kEos) out.push_back(static_cast<char>('0' + second));
  return out;
}

int ParseNumber(std::string_view digits) {
  if (digits.empty() || digits.size() > 2 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ValidationError("not a 1-2 digit number: \"" + std::string(digits) + "\"");
  }
  int v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

}  // namespace jnr
