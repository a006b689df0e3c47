#pragma once

#include <opencv2/core.hpp>
#include <string>
#include <vector>

namespace ganbench::ganprintr {
class Model;
}

namespace ganbench::transforms {

enum class Kind { IDENTITY, DOWNSIZE, LOWPASS, JPEG, GANPRINTR };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);

struct TransformSpec {
  Kind kind = Kind::IDENTITY;
  double ratio = 1.0 / 3.0;  // DOWNSIZE
  int kernel = 9;            // LOWPASS
  double sigma = 1.7;
  int quality = 60;          // JPEG
  std::string checkpoint;    // GANPRINTR

  void validate() const;
  std::string tag() const;  // e.g. "downsize(1/3)" for result tables
};

// Bilinear resample to floor(ratio*H) x floor(ratio*W) and back; the
// round trip is the resolution degradation (detectors need 224x224).
cv::Mat downsize(const cv::Mat& img, double ratio);

// Separable Gaussian, reflect padding. Kernel weights are the sampled
// Gaussian, normalised to sum 1.
cv::Mat gaussian_lowpass(const cv::Mat& img, int kernel = 9,
                         double sigma = 1.7);
std::vector<double> gaussian_kernel_1d(int kernel, double sigma);

// Baseline JPEG encode/decode round trip.
cv::Mat jpeg_compress(const cv::Mat& img, int quality = 60);

// Dispatch on spec.kind; GANPRINTR requires the model argument.
cv::Mat apply(const TransformSpec& spec, const cv::Mat& img,
              ganprintr::Model* model = nullptr);

}  // namespace ganbench::transforms
