#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "admix/clip_repr.hpp"
#include "admix/error.hpp"

namespace admix {

namespace {

cv::Mat load_image(const std::filesystem::path& path) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (img.empty()) {
    throw Error(Errc::io, "cannot decode image: " + path.string());
  }
  return img;
}

}  // namespace

Resolution image_resolution(const std::filesystem::path& path) {
  const cv::Mat img = load_image(path);
  return Resolution{img.rows, img.cols};
}

void resize_image(const std::filesystem::path& src, const std::filesystem::path& dst,
                  Resolution target) {
  if (target.height <= 0 || target.width <= 0) {
    throw Error(Errc::invalid_config, "resize target must be positive");
  }
  const cv::Mat img = load_image(src);
  cv::Mat out;
  // Direct scale to the target resolution, no letterboxing.
  cv::resize(img, out, cv::Size(target.width, target.height), 0, 0, cv::INTER_AREA);
  std::filesystem::create_directories(dst.parent_path());
  const auto tmp = dst.string() + ".tmp.jpg";
  if (!cv::imwrite(tmp, out)) {
    throw Error(Errc::io, "cannot write image: " + dst.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dst, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io, "cannot replace image: " + dst.string());
  }
}

void write_solid_image(const std::filesystem::path& path, Resolution res,
                       unsigned char gray) {
  std::filesystem::create_directories(path.parent_path());
  const cv::Mat img(res.height, res.width, CV_8UC3, cv::Scalar(gray, gray, gray));
  if (!cv::imwrite(path.string(), img)) {
    throw Error(Errc::io, "cannot write image: " + path.string());
  }
}

std::vector<unsigned char> encode_resized_jpeg(const FrameRef& frame) {
  const cv::Mat img = load_image(frame.path);
  cv::Mat out;
  cv::resize(img, out, cv::Size(frame.target.width, frame.target.height), 0, 0,
             cv::INTER_AREA);
  std::vector<unsigned char> bytes;
  if (!cv::imencode(".jpg", out, bytes)) {
    throw Error(Errc::io, "cannot encode image: " + frame.path.string());
  }
  return bytes;
}

std::vector<float> luminance_histogram(const std::filesystem::path& image, int bins) {
  if (bins < 1) {
    throw Error(Errc::invalid_config, "histogram bins must be >= 1");
  }
  const cv::Mat img = load_image(image);
  cv::Mat gray;
  cv::cvtColor(img, gray, cv::COLOR_BGR2GRAY);
  std::vector<float> hist(static_cast<std::size_t>(bins), 0.0f);
  for (int r = 0; r < gray.rows; ++r) {
    const auto* row = gray.ptr<unsigned char>(r);
    for (int c = 0; c < gray.cols; ++c) {
      hist[static_cast<std::size_t>(row[c]) * static_cast<std::size_t>(bins) / 256] += 1.0f;
    }
  }
  const auto total = static_cast<float>(gray.rows) * static_cast<float>(gray.cols);
  if (total > 0) {
    for (auto& v : hist) v /= total;
  }
  return hist;
}

}  // namespace admix
