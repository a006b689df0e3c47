#include "ganbench/image.hpp"

#include <cmath>
#include <opencv2/imgcodecs.hpp>

#include "ganbench/error.hpp"

namespace ganbench {

std::string to_string(Label l) { return l == Label::REAL ? "REAL" : "FAKE"; }

Label label_from_string(const std::string& s) {
  if (s == "REAL") return Label::REAL;
  if (s == "FAKE") return Label::FAKE;
  fail("unknown label: ", s);
}

cv::Mat load_image(const std::string& path) {
  cv::Mat img = cv::imread(path, cv::IMREAD_COLOR);
  require(!img.empty(), "cannot decode image: ", path);
  require(img.channels() == 3 && img.depth() == CV_8U,
          "expected 8-bit 3-channel image: ", path);
  return img;
}

void save_png(const std::string& path, const cv::Mat& img) {
  require(cv::imwrite(path, img, {cv::IMWRITE_PNG_COMPRESSION, 3}),
          "cannot write image: ", path);
}

nn::Tensor<float> image_to_tensor(const cv::Mat& img) {
  require(img.type() == CV_8UC3, "image_to_tensor: expected CV_8UC3");
  nn::Tensor<float> t(1, 3, img.rows, img.cols);
  for (int y = 0; y < img.rows; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x)
      for (int c = 0; c < 3; ++c)
        t.at(0, c, y, x) = static_cast<float>(row[x][c]) / 255.0f;
  }
  return t;
}

cv::Mat tensor_to_image(const nn::Tensor<float>& t, int batch_index) {
  require(t.c == 3, "tensor_to_image: expected 3 channels");
  require(batch_index >= 0 && batch_index < t.n, "batch index out of range");
  cv::Mat img(t.h, t.w, CV_8UC3);
  for (int y = 0; y < t.h; ++y) {
    cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < t.w; ++x)
      for (int c = 0; c < 3; ++c) {
        const float v = t.at(batch_index, c, y, x) * 255.0f;
        row[x][c] = static_cast<unsigned char>(
            std::lround(std::min(255.0f, std::max(0.0f, v))));
      }
  }
  return img;
}

}  // namespace ganbench
