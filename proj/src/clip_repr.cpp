#include "admix/clip_repr.hpp"

#include <cmath>

#include "admix/error.hpp"
#include "admix/util.hpp"

namespace admix {

std::string Resolution::to_string() const {
  return std::to_string(height) + "x" + std::to_string(width);
}

Resolution Resolution::parse(const std::string& text) {
  const auto sep = text.find('x');
  if (sep == std::string::npos) {
    throw Error(Errc::invalid_config, "resolution must be HxW: " + text);
  }
  Resolution r;
  try {
    r.height = std::stoi(text.substr(0, sep));
    r.width = std::stoi(text.substr(sep + 1));
  } catch (const std::exception&) {
    throw Error(Errc::invalid_config, "resolution must be HxW: " + text);
  }
  if (r.height <= 0 || r.width <= 0) {
    throw Error(Errc::invalid_config, "resolution must be positive: " + text);
  }
  return r;
}

long long mid_frame_time(double duration_s) {
  if (duration_s <= 0) {
    throw Error(Errc::invalid_argument, "mid_frame_time: duration must be > 0");
  }
  return static_cast<long long>(std::floor(duration_s / 2.0));
}

std::vector<double> temporal_frame_times(double duration_s, double fps, int max_frames) {
  if (duration_s <= 0 || fps <= 0 || max_frames < 1) {
    throw Error(Errc::invalid_config, "temporal_frame_times: invalid config");
  }
  const double h = 1.0 / fps;
  const auto m = static_cast<long long>(std::floor(duration_s * fps));
  const auto l = static_cast<long long>(max_frames);

  std::vector<long long> indices;
  if (m + 1 <= l) {
    for (long long i = 0; i <= m; ++i) indices.push_back(i);
  } else if (l == 1) {
    indices.push_back(m / 2);
  } else {
    long long prev = -1;
    for (long long i = 0; i < l; ++i) {
      const auto idx = static_cast<long long>(std::floor(
          static_cast<double>(i) * static_cast<double>(m) / static_cast<double>(l - 1) +
          0.5));
      if (idx != prev) indices.push_back(idx);
      prev = idx;
    }
  }
  std::vector<double> times;
  times.reserve(indices.size());
  for (long long idx : indices) times.push_back(static_cast<double>(idx) * h);
  return times;
}

ClipRepresentation build_representation(const ClipMeta& clip, const ReprConfig& cfg,
                                        const ClipManifest& manifest) {
  if (cfg.max_frames < 1 || cfg.fps <= 0) {
    throw Error(Errc::invalid_config, "build_representation: invalid config");
  }
  ClipRepresentation repr;
  repr.clip_id = clip.clip_id;

  const auto resolve = [&](double time_s, Resolution target) {
    FrameRef ref;
    ref.time_s = time_s;
    ref.frame_index = static_cast<long long>(std::llround(time_s * cfg.fps));
    ref.target = target;
    ref.path = frame_path(manifest, clip, ref.frame_index);
    if (!std::filesystem::exists(ref.path)) {
      throw Error(Errc::missing_frame,
                  "clip " + clip.clip_id + ": missing frame for t=" +
                      std::to_string(time_s) + "s (" + ref.path.string() + ")");
    }
    return ref;
  };

  const auto mid = static_cast<double>(mid_frame_time(clip.duration_s));
  repr.spatial = resolve(mid, cfg.spatial_res);
  for (double t : temporal_frame_times(clip.duration_s, cfg.fps, cfg.max_frames)) {
    repr.temporal.push_back(resolve(t, cfg.temporal_res));
  }
  return repr;
}

FrameCache::FrameCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path FrameCache::materialize(const std::string& clip_id,
                                              const FrameRef& frame) {
  const auto dst = root_ / clip_id /
                   (std::to_string(frame.frame_index) + "_" +
                    frame.target.to_string() + ".jpg");
  if (std::filesystem::exists(dst)) return dst;
  resize_image(frame.path, dst, frame.target);
  return dst;
}

}  // namespace admix
