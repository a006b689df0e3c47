#pragma once

#include <opencv2/core.hpp>
#include <string>

#include "ganbench/nn/tensor.hpp"

namespace ganbench {

enum class Label { REAL, FAKE };

std::string to_string(Label l);
Label label_from_string(const std::string& s);

// A decoded 8-bit BGR raster plus the labels every experiment needs.
// subject_id may be empty (synthetic images have no identity).
struct FaceImage {
  cv::Mat pixels;  // CV_8UC3
  Label label = Label::REAL;
  std::string subject_id;
  std::string source;
};

// Throws if the file is missing or not decodable as a 3-channel image.
cv::Mat load_image(const std::string& path);
void save_png(const std::string& path, const cv::Mat& img);

// [0,255] u8 HWC (BGR)  <->  [0,1] float CHW. Round-trip clamps and rounds.
nn::Tensor<float> image_to_tensor(const cv::Mat& img);
cv::Mat tensor_to_image(const nn::Tensor<float>& t, int batch_index = 0);

}  // namespace ganbench
