#include "ganbench/spectral.hpp"

#include <cmath>
#include <complex>
#include <fftw3.h>
#include <map>
#include <mutex>
#include <vector>

#include "ganbench/error.hpp"

namespace ganbench::spectral {

namespace {

// FFTW plans are cached per size; plan creation mutates global planner
// state, so guard it.
std::mutex plan_mutex;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

PlanPair& plan_for(int rows, int cols, double* in, fftw_complex* out) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& p = cache[{rows, cols}];
  if (!p.fwd) {
    p.fwd = fftw_plan_dft_r2c_2d(rows, cols, in, out, FFTW_ESTIMATE);
    p.inv = fftw_plan_dft_c2r_2d(rows, cols, out, in, FFTW_ESTIMATE);
  }
  return p;
}

cv::Mat luma_plane(const cv::Mat& bgr) {
  require(bgr.type() == CV_8UC3, "band_energy: expected CV_8UC3");
  cv::Mat out(bgr.size(), CV_64F);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    double* d = out.ptr<double>(y);
    for (int x = 0; x < bgr.cols; ++x)
      d[x] = 0.114 * row[x][0] + 0.587 * row[x][1] + 0.299 * row[x][2];
  }
  return out;
}

double radial_freq(int k, int n) {
  const int kk = (k <= n / 2) ? k : k - n;
  return static_cast<double>(kk) / n;
}

}  // namespace

double band_energy_1d(const cv::Mat& plane, double lo, double hi) {
  require(plane.type() == CV_64F, "band_energy_1d: expected CV_64F");
  const int rows = plane.rows, cols = plane.cols;
  std::vector<double> in(static_cast<std::size_t>(rows) * cols);
  std::vector<fftw_complex> out(static_cast<std::size_t>(rows) *
                                (cols / 2 + 1));
  auto& plans = plan_for(rows, cols, in.data(), out.data());
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x)
      in[static_cast<std::size_t>(y) * cols + x] = plane.at<double>(y, x);
  fftw_execute_dft_r2c(plans.fwd, in.data(), out.data());

  double acc = 0.0;
  const int half = cols / 2 + 1;
  for (int ky = 0; ky < rows; ++ky) {
    const double fy = radial_freq(ky, rows);
    for (int kx = 0; kx < half; ++kx) {
      const double fx = static_cast<double>(kx) / cols;
      const double r = std::hypot(fx, fy);
      if (r < lo || r > hi) continue;
      const auto& c = out[static_cast<std::size_t>(ky) * half + kx];
      const double mag2 = c[0] * c[0] + c[1] * c[1];
      // r2c halves the spectrum; interior columns represent two bins.
      const int mult = (kx == 0 || (cols % 2 == 0 && kx == cols / 2)) ? 1 : 2;
      acc += mult * mag2;
    }
  }
  // Parseval scaling: the band's mean-square contribution in pixel units.
  const double n = static_cast<double>(rows) * cols;
  return acc / (n * n);
}

double band_energy(const cv::Mat& bgr, double lo, double hi) {
  return band_energy_1d(luma_plane(bgr), lo, hi);
}

cv::Mat bandpass_unit_rms(const cv::Mat& plane, double lo, double hi) {
  require(plane.type() == CV_64F, "bandpass: expected CV_64F");
  const int rows = plane.rows, cols = plane.cols;
  std::vector<double> in(static_cast<std::size_t>(rows) * cols);
  std::vector<fftw_complex> out(static_cast<std::size_t>(rows) *
                                (cols / 2 + 1));
  auto& plans = plan_for(rows, cols, in.data(), out.data());
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x)
      in[static_cast<std::size_t>(y) * cols + x] = plane.at<double>(y, x);
  fftw_execute_dft_r2c(plans.fwd, in.data(), out.data());

  const int half = cols / 2 + 1;
  for (int ky = 0; ky < rows; ++ky) {
    const double fy = radial_freq(ky, rows);
    for (int kx = 0; kx < half; ++kx) {
      const double fx = static_cast<double>(kx) / cols;
      const double r = std::hypot(fx, fy);
      if (r < lo || r > hi) {
        auto& c = out[static_cast<std::size_t>(ky) * half + kx];
        c[0] = 0.0;
        c[1] = 0.0;
      }
    }
  }
  fftw_execute_dft_c2r(plans.inv, out.data(), in.data());

  const double n = static_cast<double>(rows) * cols;
  double ss = 0.0;
  for (const auto v : in) ss += (v / n) * (v / n);
  const double rms = std::sqrt(ss / n);
  require(rms > 1e-12, "bandpass: empty band");

  cv::Mat result(rows, cols, CV_64F);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x)
      result.at<double>(y, x) =
          in[static_cast<std::size_t>(y) * cols + x] / n / rms;
  return result;
}

}  // namespace ganbench::spectral
