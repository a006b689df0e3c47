#include "ganbench/transforms.hpp"

#include <cmath>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <sstream>

#include "ganbench/error.hpp"
#include "ganbench/ganprintr.hpp"

namespace ganbench::transforms {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::IDENTITY: return "identity";
    case Kind::DOWNSIZE: return "downsize";
    case Kind::LOWPASS: return "lowpass";
    case Kind::JPEG: return "jpeg";
    case Kind::GANPRINTR: return "ganprintr";
  }
  fail("bad transform kind");
}

Kind kind_from_string(const std::string& s) {
  if (s == "identity") return Kind::IDENTITY;
  if (s == "downsize") return Kind::DOWNSIZE;
  if (s == "lowpass") return Kind::LOWPASS;
  if (s == "jpeg") return Kind::JPEG;
  if (s == "ganprintr") return Kind::GANPRINTR;
  fail("unknown transform kind: ", s);
}

void TransformSpec::validate() const {
  switch (kind) {
    case Kind::DOWNSIZE:
      require(ratio > 0.0 && ratio <= 1.0, "downsize ratio out of (0,1]");
      break;
    case Kind::LOWPASS:
      require(kernel >= 3 && kernel % 2 == 1, "low-pass kernel must be odd >= 3");
      require(sigma > 0.0, "low-pass sigma must be positive");
      break;
    case Kind::JPEG:
      require(quality >= 1 && quality <= 100, "jpeg quality out of [1,100]");
      break;
    case Kind::GANPRINTR:
      require(!checkpoint.empty(), "ganprintr transform needs a checkpoint");
      break;
    case Kind::IDENTITY:
      break;
  }
}

std::string TransformSpec::tag() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::IDENTITY: os << "identity"; break;
    case Kind::DOWNSIZE: os << "downsize(" << ratio << ")"; break;
    case Kind::LOWPASS: os << "lowpass(" << kernel << "," << sigma << ")"; break;
    case Kind::JPEG: os << "jpeg(" << quality << ")"; break;
    case Kind::GANPRINTR: os << "ganprintr"; break;
  }
  return os.str();
}

cv::Mat downsize(const cv::Mat& img, double ratio) {
  require(img.type() == CV_8UC3, "downsize: expected CV_8UC3");
  require(ratio > 0.0 && ratio <= 1.0, "downsize ratio out of (0,1]");
  if (ratio == 1.0) return img.clone();
  const int h = static_cast<int>(ratio * img.rows);
  const int w = static_cast<int>(ratio * img.cols);
  require(h >= 8 && w >= 8, "downsize: intermediate size below 8 px");
  cv::Mat small, out;
  cv::resize(img, small, cv::Size(w, h), 0, 0, cv::INTER_LINEAR);
  cv::resize(small, out, img.size(), 0, 0, cv::INTER_LINEAR);
  return out;
}

std::vector<double> gaussian_kernel_1d(int kernel, double sigma) {
  require(kernel >= 3 && kernel % 2 == 1, "gaussian kernel must be odd >= 3");
  require(sigma > 0.0, "gaussian sigma must be positive");
  std::vector<double> k(kernel);
  const int r = kernel / 2;
  double sum = 0.0;
  for (int i = 0; i < kernel; ++i) {
    const double d = i - r;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

namespace {
inline int reflect(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - 1 - i;
  return i;
}
}  // namespace

cv::Mat gaussian_lowpass(const cv::Mat& img, int kernel, double sigma) {
  require(img.type() == CV_8UC3, "gaussian_lowpass: expected CV_8UC3");
  const auto k = gaussian_kernel_1d(kernel, sigma);
  const int r = kernel / 2;

  cv::Mat tmp(img.size(), CV_64FC3);
  for (int y = 0; y < img.rows; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    cv::Vec3d* t = tmp.ptr<cv::Vec3d>(y);
    for (int x = 0; x < img.cols; ++x) {
      cv::Vec3d acc(0, 0, 0);
      for (int i = -r; i <= r; ++i) {
        const cv::Vec3b& p = row[reflect(x + i, img.cols)];
        const double w = k[i + r];
        acc[0] += w * p[0];
        acc[1] += w * p[1];
        acc[2] += w * p[2];
      }
      t[x] = acc;
    }
  }
  cv::Mat out(img.size(), CV_8UC3);
  for (int y = 0; y < img.rows; ++y) {
    cv::Vec3b* o = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x) {
      cv::Vec3d acc(0, 0, 0);
      for (int i = -r; i <= r; ++i) {
        const cv::Vec3d& p = tmp.at<cv::Vec3d>(reflect(y + i, img.rows), x);
        const double w = k[i + r];
        acc[0] += w * p[0];
        acc[1] += w * p[1];
        acc[2] += w * p[2];
      }
      for (int c = 0; c < 3; ++c)
        o[x][c] = cv::saturate_cast<uchar>(std::lround(acc[c]));
    }
  }
  return out;
}

cv::Mat jpeg_compress(const cv::Mat& img, int quality) {
  require(img.type() == CV_8UC3, "jpeg_compress: expected CV_8UC3");
  require(quality >= 1 && quality <= 100, "jpeg quality out of [1,100]");
  std::vector<uchar> buf;
  require(cv::imencode(".jpg", img, buf, {cv::IMWRITE_JPEG_QUALITY, quality}),
          "jpeg encode failed");
  cv::Mat out = cv::imdecode(buf, cv::IMREAD_COLOR);
  require(!out.empty() && out.size() == img.size(), "jpeg decode failed");
  return out;
}

cv::Mat apply(const TransformSpec& spec, const cv::Mat& img,
              ganprintr::Model* model) {
  spec.validate();
  switch (spec.kind) {
    case Kind::IDENTITY: return img.clone();
    case Kind::DOWNSIZE: return downsize(img, spec.ratio);
    case Kind::LOWPASS: return gaussian_lowpass(img, spec.kernel, spec.sigma);
    case Kind::JPEG: return jpeg_compress(img, spec.quality);
    case Kind::GANPRINTR:
      require(model != nullptr, "ganprintr transform: model not loaded");
      return model->apply(img);
  }
  fail("bad transform kind");
}

}  // namespace ganbench::transforms
