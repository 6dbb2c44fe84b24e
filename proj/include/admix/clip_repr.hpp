#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "admix/manifest.hpp"

namespace admix {

struct Resolution {
  int height = 0;
  int width = 0;

  bool operator==(const Resolution&) const = default;
  std::string to_string() const;       // "996x560" (height x width)
  static Resolution parse(const std::string& text);
};

struct ReprConfig {
  double fps = 1.0;
  int max_frames = 5;
  Resolution spatial_res{996, 560};
  Resolution temporal_res{560, 315};
};

struct FrameRef {
  std::filesystem::path path;  // source frame file
  double time_s = 0.0;
  long long frame_index = 0;
  Resolution target;  // resolution the frame is resized to when materialized

  bool operator==(const FrameRef&) const = default;
};

struct ClipRepresentation {
  std::string clip_id;
  FrameRef spatial;
  std::vector<FrameRef> temporal;
  std::optional<std::string> supplementary;  // rewritten-script hint, training-data only
};

// Source time of the single high-resolution frame: floor(T / 2), in seconds.
long long mid_frame_time(double duration_s);

// Frame times covering the clip at the given rate, at most max_frames of
// them. With h = 1/fps and m = floor(T/h), the full set is (0, h, ..., m*h);
// when that exceeds max_frames, indices idx_i = floor(i*m/(l-1) + 0.5) are
// kept (deduplicated in order). max_frames == 1 keeps the middle index.
std::vector<double> temporal_frame_times(double duration_s, double fps, int max_frames);

// Resolves the frame files for one clip. Throws Errc::missing_frame naming
// the clip and time when a required file is absent.
ClipRepresentation build_representation(const ClipMeta& clip, const ReprConfig& cfg,
                                        const ClipManifest& manifest);

// Disk-backed resize cache. Materialisation is lazy: representations carry
// source paths + target resolutions, pixels are produced on first request.
// Keyed by (clip_id, frame_index, resolution); concurrent writers of the
// same key are last-writer-wins via atomic rename.
class FrameCache {
 public:
  explicit FrameCache(std::filesystem::path root);

  // Returns the path of the resized image, producing it if needed.
  std::filesystem::path materialize(const std::string& clip_id, const FrameRef& frame);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

// Image helpers (OpenCV-backed, kept behind this surface).
Resolution image_resolution(const std::filesystem::path& path);
void resize_image(const std::filesystem::path& src, const std::filesystem::path& dst,
                  Resolution target);
void write_solid_image(const std::filesystem::path& path, Resolution res,
                       unsigned char gray);
// Normalized luminance histogram (sums to 1) used for visual segmentation.
std::vector<float> luminance_histogram(const std::filesystem::path& image, int bins = 64);
// Loads, resizes to the frame's target resolution, and re-encodes as JPEG.
std::vector<unsigned char> encode_resized_jpeg(const FrameRef& frame);

}  // namespace admix
