#include "jnr/interchange.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace jnr {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {"tracklet_id", "frame_idx",   "bbox",      "legibility",
                                             "char_dists",  "confidence",  "predicted", "keypoints",
                                             "embedding_ref"};
  return keys;
}

std::string FormatFixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string FormatValue(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing key \"") + key + "\"");
  return *it;
}

double AsNumber(const json& v, const std::string& what) {
  if (!v.is_number()) throw FormatError("\"" + what + "\" must be a number");
  return v.get<double>();
}

std::uint64_t AsIndex(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    throw FormatError("\"" + what + "\" must be non-negative, got " + std::to_string(v.get<std::int64_t>()));
  }
  throw FormatError("\"" + what + "\" must be a non-negative integer");
}

FramePrediction FromJson(const json& obj) {
  if (!obj.is_object()) throw FormatError("record is not a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!KnownKeys().contains(key)) throw FormatError("unexpected key \"" + key + "\"");
  }

  FramePrediction rec;
  const json& id = Require(obj, "tracklet_id");
  if (!id.is_string()) throw FormatError("\"tracklet_id\" must be a string");
  rec.tracklet_id = id.get<std::string>();
  rec.frame_idx = AsIndex(Require(obj, "frame_idx"), "frame_idx");

  const json& bbox = Require(obj, "bbox");
  if (!bbox.is_array() || bbox.size() != 4) throw FormatError("\"bbox\" must be an array of 4 numbers");
  rec.bbox = {AsNumber(bbox[0], "bbox"), AsNumber(bbox[1], "bbox"), AsNumber(bbox[2], "bbox"),
              AsNumber(bbox[3], "bbox")};

  rec.legibility = AsNumber(Require(obj, "legibility"), "legibility");
  rec.confidence = AsNumber(Require(obj, "confidence"), "confidence");

  const json& dists = Require(obj, "char_dists");
  if (!dists.is_array() || dists.size() != kNumPositions) {
    throw FormatError("\"char_dists\" must be a 2x11 array");
  }
  for (std::size_t j = 0; j < kNumPositions; ++j) {
    if (!dists[j].is_array() || dists[j].size() != kNumChars) {
      throw FormatError("\"char_dists\" must be a 2x11 array");
    }
    for (std::size_t k = 0; k < kNumChars; ++k) {
      rec.char_dists[j][k] = AsNumber(dists[j][k], "char_dists");
    }
  }

  const json& predicted = Require(obj, "predicted");
  if (!predicted.is_string()) throw FormatError("\"predicted\" must be a string");
  rec.predicted = predicted.get<std::string>();

  if (auto it = obj.find("keypoints"); it != obj.end()) {
    if (!it->is_object()) throw FormatError("\"keypoints\" must be an object");
    Keypoints kp;
    for (const auto& [name, xy] : it->items()) {
      if (!xy.is_array() || xy.size() != 2) {
        throw FormatError("keypoint \"" + name + "\" must be an [x, y] pair");
      }
      kp[name] = {AsNumber(xy[0], "keypoints"), AsNumber(xy[1], "keypoints")};
    }
    rec.keypoints = std::move(kp);
  }
  if (auto it = obj.find("embedding_ref"); it != obj.end()) {
    rec.embedding_ref = AsIndex(*it, "embedding_ref");
  }
  return rec;
}

ordered_json ToJson(const FramePrediction& rec) {
  ordered_json obj;
  obj["tracklet_id"] = rec.tracklet_id;
  obj["frame_idx"] = rec.frame_idx;
  obj["bbox"] = {rec.bbox.x, rec.bbox.y, rec.bbox.w, rec.bbox.h};
  obj["legibility"] = rec.legibility;
  ordered_json dists = ordered_json::array();
  for (const auto& d : rec.char_dists) dists.push_back(ordered_json(std::vector<double>(d.begin(), d.end())));
  obj["char_dists"] = std::move(dists);
  obj["confidence"] = rec.confidence;
  obj["predicted"] = rec.predicted;
  if (rec.keypoints) {
    ordered_json kp = ordered_json::object();
    for (const auto& [name, p] : *rec.keypoints) kp[name] = {p.x, p.y};
    obj["keypoints"] = std::move(kp);
  }
  if (rec.embedding_ref) obj["embedding_ref"] = *rec.embedding_ref;
  return obj;
}

void PutU32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

void PutU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

template <typename T>
T GetLE(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

std::ifstream OpenIn(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<Violation> ValidateRecord(const FramePrediction& rec) {
  std::vector<Violation> out;
  auto add = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  if (rec.tracklet_id.empty()) add("tracklet_id", "tracklet_id is empty");

  const BBox& b = rec.bbox;
  if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) || !std::isfinite(b.h)) {
    add("bbox", "bbox has non-finite coordinates");
  } else if (!(b.w > 0.0) || !(b.h > 0.0)) {
    add("bbox", "bbox size must be positive, got " + FormatValue(b.w) + "x" + FormatValue(b.h));
  }

  if (!(rec.legibility >= 0.0 && rec.legibility <= 1.0)) {
    add("legibility", "legibility " + FormatValue(rec.legibility) + " outside [0, 1]");
  }
  if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
    add("confidence", "confidence " + FormatValue(rec.confidence) + " outside [0, 1]");
  }

  bool dists_ok = true;
  for (std::size_t j = 0; j < kNumPositions; ++j) {
    const std::string field = "char_dists[" + std::to_string(j) + "]";
    double sum = 0.0;
    bool entries_ok = true;
    for (std::size_t k = 0; k < kNumChars; ++k) {
      const double p = rec.char_dists[j][k];
      if (!std::isfinite(p) || p < 0.0) {
        add(field, field + "[" + std::to_string(k) + "] = " + FormatValue(p) + " is not a probability");
        entries_ok = false;
      }
      sum += p;
    }
    if (entries_ok && std::abs(sum - 1.0) > kDistSumTolerance) {
      add(field, field + " sums to " + FormatFixed(sum));
      entries_ok = false;
    }
    dists_ok = dists_ok && entries_ok;
  }

  const bool digits_only = std::all_of(rec.predicted.begin(), rec.predicted.end(),
                                       [](char c) { return c >= '0' && c <= '9'; });
  if (rec.predicted.size() > 2 || !digits_only) {
    add("predicted", "predicted \"" + rec.predicted + "\" is not a string of 0-2 digits");
  } else if (dists_ok) {
    const std::string decoded = DecodeArgmax(rec.char_dists);
    if (decoded != rec.predicted) {
      add("predicted", "predicted \"" + rec.predicted + "\" but argmax decode is \"" + decoded + "\"");
    }
  }

  if (rec.keypoints) {
    for (const auto& [name, p] : *rec.keypoints) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        add("keypoints", "keypoint \"" + name + "\" has non-finite coordinates");
      }
    }
  }
  return out;
}

FramePrediction ParseFrameRecord(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  return FromJson(obj);
}

std::string FormatFrameRecord(const FramePrediction& rec) { return ToJson(rec).dump(); }

std::vector<Tracklet> ParseFrameRecords(std::istream& in) {
  std::map<std::string, std::map<std::uint64_t, FramePrediction>> grouped;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    FramePrediction rec;
    try {
      rec = ParseFrameRecord(line);
    } catch (const FormatError& e) {
      throw FormatError(where + e.what());
    }
    if (auto violations = ValidateRecord(rec); !violations.empty()) {
      std::string msg = where + violations.front().message;
      for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i].message;
      throw ValidationError(msg);
    }
    const std::string id = rec.tracklet_id;
    const std::uint64_t idx = rec.frame_idx;
    if (!grouped[id].emplace(idx, std::move(rec)).second) {
      throw ValidationError(where + "duplicate record for tracklet_id \"" + id + "\", frame_idx " +
                            std::to_string(idx));
    }
  }

  std::vector<Tracklet> out;
  out.reserve(grouped.size());
  for (auto& [id, frames] : grouped) {
    Tracklet t;
    t.tracklet_id = id;
    t.frames.reserve(frames.size());
    for (auto& [_, rec] : frames) t.frames.push_back(std::move(rec));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Tracklet> ParseFrameRecords(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseFrameRecords(in);
}

void WriteFrameRecords(std::ostream& out, std::span<const Tracklet> tracklets) {
  for (const Tracklet& t : tracklets) {
    for (const FramePrediction& f : t.frames) out << FormatFrameRecord(f) << '\n';
  }
}

EmbeddingMatrix ReadEmbeddings(std::istream& in) {
  std::array<unsigned char, kEmbeddingHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (static_cast<std::size_t>(in.gcount()) != header.size()) {
    throw FormatError("embedding file too short for header: expected " + std::to_string(header.size()) +
                      " bytes, found " + std::to_string(in.gcount()));
  }
  if (!std::equal(std::begin(kEmbeddingMagic), std::end(kEmbeddingMagic), header.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    throw FormatError("bad embedding magic, expected \"JNRE\"");
  }
  const auto version = GetLE<std::uint32_t>(header.data() + 4);
  if (version != kEmbeddingVersion) {
    throw FormatError("unsupported embedding version " + std::to_string(version));
  }
  const auto dim = GetLE<std::uint32_t>(header.data() + 8);
  const auto count = GetLE<std::uint64_t>(header.data() + 12);
  if (dim == 0 && count > 0) throw FormatError("embedding dim is 0 with non-zero count");

  constexpr std::uint64_t kMaxBytes = std::uint64_t{1} << 40;
  if (dim != 0 && count > kMaxBytes / (std::uint64_t{dim} * 4)) {
    throw FormatError("embedding payload size overflows: count " + std::to_string(count) + ", dim " +
                      std::to_string(dim));
  }
  const std::uint64_t expected = count * dim * 4;

  std::vector<unsigned char> payload;
  payload.reserve(static_cast<std::size_t>(expected));
  payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (payload.size() != expected) {
    throw FormatError("expected " + std::to_string(expected) + " payload bytes, found " +
                      std::to_string(payload.size()));
  }

  std::vector<float> values(static_cast<std::size_t>(count) * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = GetLE<std::uint32_t>(payload.data() + 4 * i);
    static_assert(sizeof(float) == sizeof(std::uint32_t));
    std::memcpy(&values[i], &bits, sizeof(float));
  }
  return EmbeddingMatrix(static_cast<std::size_t>(count), dim, std::move(values));
}

void WriteEmbeddings(std::ostream& out, const EmbeddingMatrix& m) {
  out.write(kEmbeddingMagic, sizeof(kEmbeddingMagic));
  PutU32(out, kEmbeddingVersion);
  PutU32(out, static_cast<std::uint32_t>(m.dim()));
  PutU64(out, m.rows());
  for (float v : m.values()) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &v, sizeof(float));
    PutU32(out, bits);
  }
}

void AttachEmbeddings(std::vector<Tracklet>& tracklets, const EmbeddingMatrix& sidecar) {
  for (Tracklet& t : tracklets) {
    EmbeddingMatrix rows(0, sidecar.dim());
    bool any = false;
    for (const FramePrediction& f : t.frames) {
      if (!f.embedding_ref) continue;
      if (*f.embedding_ref >= sidecar.rows()) {
        throw ValidationError("tracklet \"" + t.tracklet_id + "\" frame " + std::to_string(f.frame_idx) +
                              ": embedding_ref " + std::to_string(*f.embedding_ref) + " out of range (" +
                              std::to_string(sidecar.rows()) + " embeddings)");
      }
      rows.append_row(sidecar.row(static_cast<std::size_t>(*f.embedding_ref)));
      any = true;
    }
    if (any) {
      t.embeddings = std::move(rows);
    } else {
      t.embeddings.reset();
    }
  }
}

void WriteCorpus(std::ostream& records, std::ostream& sidecar, std::span<const Tracklet> tracklets) {
  std::size_t dim = 0;
  for (const Tracklet& t : tracklets) {
    if (t.embeddings && t.embeddings->rows() > 0) {
      dim = t.embeddings->dim();
      break;
    }
  }
  EmbeddingMatrix all(0, dim);
  std::uint64_t next_ref = 0;
  for (const Tracklet& t : tracklets) {
    std::size_t row = 0;
    for (FramePrediction f : t.frames) {
      if (f.embedding_ref) {
        if (!t.embeddings || row >= t.embeddings->rows()) {
          throw ValidationError("tracklet \"" + t.tracklet_id +
                                "\": embedding count does not match frames with embedding_ref");
        }
        all.append_row(t.embeddings->row(row++));
        f.embedding_ref = next_ref++;
      }
      records << FormatFrameRecord(f) << '\n';
    }
  }
  WriteEmbeddings(sidecar, all);
}

LabelMap ReadLabelMap(std::istream& in) {
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed label map: ") + e.what());
  }
  if (!obj.is_object()) throw FormatError("label map must be a JSON object");
  LabelMap out;
  for (const auto& [id, v] : obj.items()) {
    if (!v.is_number_integer()) throw FormatError("label for \"" + id + "\" must be an integer");
    out.emplace(id, TrackletLabel::FromValue(v.get<int>()));
  }
  return out;
}

void WriteLabelMap(std::ostream& out, const LabelMap& labels) {
  ordered_json obj = ordered_json::object();
  for (const auto& [id, label] : labels) obj[id] = label.value();
  out << obj.dump(2) << '\n';
}

void ApplyGroundTruth(std::vector<Tracklet>& tracklets, const LabelMap& gt) {
  for (Tracklet& t : tracklets) {
    if (auto it = gt.find(t.tracklet_id); it != gt.end()) t.gt_label = it->second;
  }
}

std::vector<Tracklet> LoadTracklets(const std::filesystem::path& records,
                                    const std::optional<std::filesystem::path>& embeddings,
                                    const std::optional<std::filesystem::path>& ground_truth) {
  std::vector<Tracklet> tracklets;
  {
    auto in = OpenIn(records);
    tracklets = ParseFrameRecords(in);
  }
  if (embeddings) {
    auto in = OpenIn(*embeddings, std::ios::in | std::ios::binary);
    AttachEmbeddings(tracklets, ReadEmbeddings(in));
  } else {
    for (const Tracklet& t : tracklets) {
      if (t.embedded_frame_count() > 0) {
        throw ValidationError("tracklet \"" + t.tracklet_id + "\" has embedding_ref but no embedding file given");
      }
    }
  }
  if (ground_truth) ApplyGroundTruth(tracklets, LoadLabelMap(*ground_truth));
  return tracklets;
}

LabelMap LoadLabelMap(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadLabelMap(in);
}

void SaveLabelMap(const std::filesystem::path& path, const LabelMap& labels) {
  auto out = OpenOut(path);
  WriteLabelMap(out, labels);
  if (!out) throw IoError("failed writing " + path.string());
}

void SaveCorpus(const std::filesystem::path& records, const std::filesystem::path& sidecar,
                std::span<const Tracklet> tracklets) {
  auto rec_out = OpenOut(records);
  auto emb_out = OpenOut(sidecar, std::ios::out | std::ios::binary);
  WriteCorpus(rec_out, emb_out, tracklets);
  if (!rec_out || !emb_out) throw IoError("failed writing corpus to " + records.string());
}

}  // namespace jnr
