#include "admix/manifest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "admix/error.hpp"
#include "admix/util.hpp"

namespace admix {

using ojson = nlohmann::ordered_json;

const ClipMeta& ClipManifest::clip_by_id(const std::string& clip_id) const {
  for (const auto& c : clips) {
    if (c.clip_id == clip_id) return c;
  }
  throw Error(Errc::unknown_clip, "unknown clip id: " + clip_id);
}

const ClipMeta& ClipManifest::clip_by_index(int index) const {
  for (const auto& c : clips) {
    if (c.index == index) return c;
  }
  throw Error(Errc::unknown_clip, "unknown clip index: " + std::to_string(index));
}

bool ClipManifest::has_clip(const std::string& clip_id) const {
  return std::any_of(clips.begin(), clips.end(),
                     [&](const ClipMeta& c) { return c.clip_id == clip_id; });
}

std::string frame_file_name(long long frame_index) {
  std::string digits = std::to_string(frame_index);
  while (digits.size() < 3) digits.insert(digits.begin(), '0');
  return digits + ".jpg";
}

std::filesystem::path frame_path(const ClipManifest& manifest, const ClipMeta& clip,
                                 long long frame_index) {
  std::filesystem::path dir = clip.frame_dir;
  if (dir.is_relative() && !manifest.base_dir.empty()) {
    dir = manifest.base_dir / dir;
  }
  return dir / frame_file_name(frame_index);
}

void validate_manifest(const ClipManifest& manifest, bool check_frames) {
  if (manifest.product.product_id.empty()) {
    throw Error(Errc::schema, "product.product_id must be non-empty");
  }
  if (manifest.product.name.empty()) {
    throw Error(Errc::schema, "product.name must be non-empty");
  }
  if (manifest.fps <= 0) {
    throw Error(Errc::schema, "fps must be > 0");
  }

  std::set<int> indices;
  std::set<std::string> ids;
  for (const auto& clip : manifest.clips) {
    if (clip.clip_id.empty()) {
      throw Error(Errc::schema, "clip with empty clip_id");
    }
    if (!ids.insert(clip.clip_id).second) {
      throw Error(Errc::duplicate_clip, "duplicate clip id: " + clip.clip_id);
    }
    if (!indices.insert(clip.index).second) {
      throw Error(Errc::duplicate_index,
                  "duplicate clip index: " + std::to_string(clip.index));
    }
    if (clip.duration_s <= 0) {
      throw Error(Errc::schema, "clip " + clip.clip_id + ": duration_s must be > 0");
    }
    if (clip.transcript_spans) {
      const auto& spans = *clip.transcript_spans;
      for (std::size_t i = 0; i < spans.size(); ++i) {
        if (spans[i].end_s < spans[i].start_s) {
          throw Error(Errc::schema, "clip " + clip.clip_id + ": span " +
                                        std::to_string(i) + " ends before it starts");
        }
        if (i > 0 && spans[i].start_s < spans[i - 1].end_s) {
          throw Error(Errc::schema, "clip " + clip.clip_id + ": span " +
                                        std::to_string(i) + " overlaps previous span");
        }
      }
    }
  }
  // Indices must be exactly 1..N.
  int expected = 1;
  for (int idx : indices) {
    if (idx != expected) {
      throw Error(Errc::schema,
                  "clip indices must be contiguous 1..N; missing index " +
                      std::to_string(expected));
    }
    ++expected;
  }

  if (check_frames) {
    for (const auto& clip : manifest.clips) {
      const long long last = static_cast<long long>(
          std::floor(clip.duration_s * manifest.fps));
      for (long long f = 0; f <= last; ++f) {
        const auto p = frame_path(manifest, clip, f);
        if (!std::filesystem::exists(p)) {
          throw Error(Errc::missing_frame, "clip " + clip.clip_id +
                                               ": missing frame file " + p.string());
        }
      }
    }
  }
}

void validate_sequence(const CreativeSequence& seq, const ClipManifest& manifest) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < seq.tuples.size(); ++i) {
    const auto& t = seq.tuples[i];
    if (!manifest.has_clip(t.clip_id)) {
      throw Error(Errc::unknown_clip,
                  "tuple " + std::to_string(i) + ": unknown clip " + t.clip_id);
    }
    if (!seen.insert(t.clip_id).second) {
      throw Error(Errc::duplicate_clip,
                  "tuple " + std::to_string(i) + ": duplicate clip " + t.clip_id);
    }
    if (t.script.empty()) {
      throw Error(Errc::missing_script, "tuple " + std::to_string(i) + ": empty script");
    }
    std::string joined;
    for (const auto& seg : t.subtitles) {
      if (seg.empty()) {
        throw Error(Errc::empty_segment,
                    "tuple " + std::to_string(i) + ": empty subtitle segment");
      }
      joined += seg;
    }
    if (joined != t.script) {
      throw Error(Errc::concat_mismatch,
                  "tuple " + std::to_string(i) +
                      ": subtitles do not re-concatenate to the script");
    }
  }
}

namespace {

const ojson& require(const ojson& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(Errc::schema, where + ": missing field '" + key + "'");
  }
  return *it;
}

}  // namespace

ojson manifest_to_json(const ClipManifest& manifest) {
  ojson doc;
  doc["format_version"] = kManifestFormatVersion;
  doc["fps"] = manifest.fps;
  ojson product;
  product["product_id"] = manifest.product.product_id;
  product["name"] = manifest.product.name;
  product["selling_points"] = manifest.product.selling_points;
  ojson extra = ojson::object();
  for (const auto& [k, v] : manifest.product.extra) extra[k] = v;
  product["extra"] = std::move(extra);
  doc["product"] = std::move(product);

  ojson clips = ojson::array();
  for (const auto& clip : manifest.clips) {
    ojson c;
    c["clip_id"] = clip.clip_id;
    c["index"] = clip.index;
    c["duration_s"] = clip.duration_s;
    c["frame_dir"] = clip.frame_dir.generic_string();
    c["source_video_id"] = clip.source_video_id;
    if (clip.transcript) c["transcript"] = *clip.transcript;
    if (clip.transcript_spans) {
      ojson spans = ojson::array();
      for (const auto& s : *clip.transcript_spans) {
        spans.push_back({{"text", s.text}, {"start_s", s.start_s}, {"end_s", s.end_s}});
      }
      c["transcript_spans"] = std::move(spans);
    }
    clips.push_back(std::move(c));
  }
  doc["clips"] = std::move(clips);
  return doc;
}

ClipManifest manifest_from_json(const ojson& doc) {
  const auto version = require(doc, "format_version", "manifest").get<int>();
  if (version != kManifestFormatVersion) {
    throw Error(Errc::version_mismatch,
                "manifest format_version " + std::to_string(version) +
                    " not supported (expected " +
                    std::to_string(kManifestFormatVersion) + ")");
  }
  ClipManifest m;
  m.fps = require(doc, "fps", "manifest").get<double>();
  const auto& product = require(doc, "product", "manifest");
  m.product.product_id = require(product, "product_id", "product").get<std::string>();
  m.product.name = require(product, "name", "product").get<std::string>();
  if (auto it = product.find("selling_points"); it != product.end()) {
    m.product.selling_points = it->get<std::vector<std::string>>();
  }
  if (auto it = product.find("extra"); it != product.end()) {
    for (const auto& [k, v] : it->items()) {
      m.product.extra.emplace_back(k, v.get<std::string>());
    }
  }
  const auto& clips = require(doc, "clips", "manifest");
  if (!clips.is_array()) {
    throw Error(Errc::schema, "manifest: 'clips' must be an array");
  }
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& c = clips[i];
    const std::string where = "clips[" + std::to_string(i) + "]";
    ClipMeta clip;
    clip.clip_id = require(c, "clip_id", where).get<std::string>();
    clip.index = require(c, "index", where).get<int>();
    clip.duration_s = require(c, "duration_s", where).get<double>();
    clip.frame_dir = require(c, "frame_dir", where).get<std::string>();
    clip.source_video_id = require(c, "source_video_id", where).get<std::string>();
    if (auto it = c.find("transcript"); it != c.end()) {
      clip.transcript = it->get<std::string>();
    }
    if (auto it = c.find("transcript_spans"); it != c.end()) {
      std::vector<TranscriptSpan> spans;
      for (const auto& s : *it) {
        TranscriptSpan span;
        span.text = require(s, "text", where + ".transcript_spans").get<std::string>();
        span.start_s = require(s, "start_s", where + ".transcript_spans").get<double>();
        span.end_s = require(s, "end_s", where + ".transcript_spans").get<double>();
        spans.push_back(std::move(span));
      }
      clip.transcript_spans = std::move(spans);
    }
    m.clips.push_back(std::move(clip));
  }
  return m;
}

ClipManifest load_manifest(const std::filesystem::path& path, bool check_frames) {
  if (!std::filesystem::exists(path)) {
    throw Error(Errc::io, "manifest not found: " + path.string());
  }
  ojson doc;
  try {
    doc = ojson::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::schema, "manifest " + path.string() + ": " + e.what(),
                static_cast<long>(e.byte));
  }
  ClipManifest m = manifest_from_json(doc);
  m.base_dir = path.parent_path();
  validate_manifest(m, check_frames);
  return m;
}

void save_manifest(const ClipManifest& manifest, const std::filesystem::path& path) {
  validate_manifest(manifest, /*check_frames=*/false);
  write_file_atomic(path, manifest_to_json(manifest).dump(2) + "\n");
}

}  // namespace admix
