#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace admix {

inline constexpr int kManifestFormatVersion = 1;

struct ProductInfo {
  std::string product_id;
  std::string name;
  std::vector<std::string> selling_points;
  // Free-form attributes; insertion order is part of the format.
  std::vector<std::pair<std::string, std::string>> extra;

  bool operator==(const ProductInfo&) const = default;
};

struct TranscriptSpan {
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;

  bool operator==(const TranscriptSpan&) const = default;
};

struct ClipMeta {
  std::string clip_id;
  int index = 0;  // 1-based position in the input pool
  double duration_s = 0.0;
  std::filesystem::path frame_dir;  // relative paths resolve against the manifest dir
  std::string source_video_id;
  std::optional<std::string> transcript;
  std::optional<std::vector<TranscriptSpan>> transcript_spans;

  bool operator==(const ClipMeta&) const = default;
};

struct ClipManifest {
  ProductInfo product;
  std::vector<ClipMeta> clips;
  double fps = 1.0;  // frame-extraction rate the frame dirs were built at
  // Directory all relative frame_dirs resolve against (set on load, not stored).
  std::filesystem::path base_dir;

  const ClipMeta& clip_by_id(const std::string& clip_id) const;
  const ClipMeta& clip_by_index(int index) const;
  bool has_clip(const std::string& clip_id) const;

  bool operator==(const ClipManifest& other) const {
    return product == other.product && clips == other.clips && fps == other.fps;
  }
};

struct CreativeTuple {
  std::string clip_id;
  std::string script;
  std::vector<std::string> subtitles;

  bool operator==(const CreativeTuple&) const = default;
};

struct CreativeSequence {
  std::vector<CreativeTuple> tuples;

  bool operator==(const CreativeSequence&) const = default;
};

// Frame files live under <frame_dir>/<frame_index 0-padded to 3>.jpg.
std::string frame_file_name(long long frame_index);
std::filesystem::path frame_path(const ClipManifest& manifest, const ClipMeta& clip,
                                 long long frame_index);

// Checks every invariant (field shapes, index contiguity, id uniqueness,
// span ordering, frame-file existence). Throws Error on the first failure.
void validate_manifest(const ClipManifest& manifest, bool check_frames = true);

// Checks the sequence against the manifest: ids resolve, no duplicates,
// scripts non-empty, subtitle concatenation equals the script.
void validate_sequence(const CreativeSequence& seq, const ClipManifest& manifest);

ClipManifest load_manifest(const std::filesystem::path& path, bool check_frames = true);
void save_manifest(const ClipManifest& manifest, const std::filesystem::path& path);

nlohmann::ordered_json manifest_to_json(const ClipManifest& manifest);
ClipManifest manifest_from_json(const nlohmann::ordered_json& doc);

}  // namespace admix
