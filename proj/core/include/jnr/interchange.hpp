#pragma once

// On-disk interchange formats.
//
// Frame records: UTF-8 JSON lines, one FramePrediction per line, keys
//   tracklet_id, frame_idx, bbox [x,y,w,h], legibility, char_dists (2x11),
//   confidence, predicted, keypoints {joint: [x,y]} (optional),
//   embedding_ref (optional).
//
// Embedding sidecar (little-endian):
//   "JNRE" | u32 version=1 | u32 dim | u64 count | count*dim float32
//
// Ground truth: JSON object {tracklet_id: label}, label -1 for illegible.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jnr/types.hpp"

namespace jnr {

inline constexpr char kEmbeddingMagic[4] = {'J', 'N', 'R', 'E'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 20;

struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every record-level invariant; empty result means the record is valid.
std::vector<Violation> ValidateRecord(const FramePrediction& record);

/// Parses one JSON line into a record without checking domain invariants.
/// Throws FormatError on malformed JSON, missing keys or wrongly typed values.
FramePrediction ParseFrameRecord(std::string_view line);

std::string FormatFrameRecord(const FramePrediction& record);

/// Parses a whole JSON-lines stream, validates every record, and groups by
/// tracklet id. Tracklets come back sorted by id, frames by frame_idx.
/// Errors name the 1-based line number.
std::vector<Tracklet> ParseFrameRecords(std::istream& in);
std::vector<Tracklet> ParseFrameRecords(std::string_view text);

/// Writes records tracklet by tracklet in the order given.
void WriteFrameRecords(std::ostream& out, std::span<const Tracklet> tracklets);

EmbeddingMatrix ReadEmbeddings(std::istream& in);
void WriteEmbeddings(std::ostream& out, const EmbeddingMatrix& matrix);

/// Resolves each frame's embedding_ref against the sidecar and fills
/// Tracklet::embeddings. Throws ValidationError on out-of-range references.
void AttachEmbeddings(std::vector<Tracklet>& tracklets, const EmbeddingMatrix& sidecar);

/// Writes records plus sidecar. embedding_ref values are renumbered
/// sequentially in (tracklet, frame) order so the pair stays self-consistent.
void WriteCorpus(std::ostream& records, std::ostream& sidecar, std::span<const Tracklet> tracklets);

LabelMap ReadLabelMap(std::istream& in);
void WriteLabelMap(std::ostream& out, const LabelMap& labels);

/// Sets gt_label on tracklets present in the map.
void ApplyGroundTruth(std::vector<Tracklet>& tracklets, const LabelMap& gt);

// File wrappers; open failures raise IoError naming the path.
std::vector<Tracklet> LoadTracklets(const std::filesystem::path& records,
                                    const std::optional<std::filesystem::path>& embeddings = std::nullopt,
                                    const std::optional<std::filesystem::path>& ground_truth = std::nullopt);
LabelMap LoadLabelMap(const std::filesystem::path& path);
void SaveLabelMap(const std::filesystem::path& path, const LabelMap& labels);
void SaveCorpus(const std::filesystem::path& records, const std::filesystem::path& sidecar,
                std::span<const Tracklet> tracklets);

}  // namespace jnr
