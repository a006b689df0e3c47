#include "ganbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ganbench/error.hpp"

namespace ganbench::metrics {

namespace {

// FPR/FNR at every distinct score, by a two-pointer sweep over the
// sorted lists.
struct OperatingPoint {
  double t, fpr, fnr;
};

std::vector<OperatingPoint> roc_points(std::vector<double> real,
                                       std::vector<double> fake) {
  std::sort(real.begin(), real.end());
  std::sort(fake.begin(), fake.end());
  std::vector<double> ts;
  ts.reserve(real.size() + fake.size() + 1);
  ts.insert(ts.end(), real.begin(), real.end());
  ts.insert(ts.end(), fake.begin(), fake.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  // A sentinel above every score: FPR 0, FNR 1.
  ts.push_back(ts.back() + 1.0);

  std::vector<OperatingPoint> pts;
  pts.reserve(ts.size());
  std::size_t ri = 0, fi = 0;
  for (const double t : ts) {
    while (ri < real.size() && real[ri] < t) ++ri;
    while (fi < fake.size() && fake[fi] < t) ++fi;
    const double fpr = static_cast<double>(real.size() - ri) / real.size();
    const double fnr = static_cast<double>(fi) / fake.size();
    pts.push_back({t, fpr, fnr});
  }
  return pts;
}

}  // namespace

std::pair<double, double> compute_eer(const std::vector<double>& real_scores,
                                      const std::vector<double>& fake_scores) {
  require(!real_scores.empty() && !fake_scores.empty(),
          "compute_eer: empty score list");
  const auto pts = roc_points(real_scores, fake_scores);
  // d = FPR - FNR decreases from +1 to -1 as t grows.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = pts[i].fpr - pts[i].fnr;
    if (d == 0.0) return {100.0 * pts[i].fpr, pts[i].t};
    if (d < 0.0) {
      require(i > 0, "compute_eer: no crossing bracket");
      const double d0 = pts[i - 1].fpr - pts[i - 1].fnr;
      const double lambda = d0 / (d0 - d);
      const double eer =
          pts[i - 1].fpr + lambda * (pts[i].fpr - pts[i - 1].fpr);
      const double thr = pts[i - 1].t + lambda * (pts[i].t - pts[i - 1].t);
      return {100.0 * eer, thr};
    }
  }
  fail("compute_eer: crossing not found");
}

std::pair<double, double> compute_recalls(
    const std::vector<double>& real_scores,
    const std::vector<double>& fake_scores, double threshold) {
  require(!real_scores.empty() && !fake_scores.empty(),
          "compute_recalls: empty score list");
  require(std::isfinite(threshold), "compute_recalls: non-finite threshold");
  std::size_t real_ok = 0, fake_ok = 0;
  for (const double s : real_scores)
    if (s < threshold) ++real_ok;
  for (const double s : fake_scores)
    if (s >= threshold) ++fake_ok;
  return {100.0 * real_ok / real_scores.size(),
          100.0 * fake_ok / fake_scores.size()};
}

double compute_auc(const std::vector<double>& real_scores,
                   const std::vector<double>& fake_scores) {
  require(!real_scores.empty() && !fake_scores.empty(),
          "compute_auc: empty score list");
  // Rank-sum with average ranks for ties.
  std::vector<std::pair<double, int>> pool;  // (score, is_fake)
  pool.reserve(real_scores.size() + fake_scores.size());
  for (const double s : real_scores) pool.emplace_back(s, 0);
  for (const double s : fake_scores) pool.emplace_back(s, 1);
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double fake_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].first == pool[i].first) ++j;
    const double avg_rank = (static_cast<double>(i) + j + 1.0) / 2.0;  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (pool[k].second) fake_rank_sum += avg_rank;
    i = j;
  }
  const double m = static_cast<double>(fake_scores.size());
  const double n = static_cast<double>(real_scores.size());
  const double u = fake_rank_sum - m * (m + 1.0) / 2.0;
  return 100.0 * u / (m * n);
}

double psnr_db(const cv::Mat& a, const cv::Mat& b) {
  require(a.size() == b.size() && a.type() == b.type() && a.type() == CV_8UC3,
          "psnr: shape/type mismatch");
  double se = 0.0;
  for (int y = 0; y < a.rows; ++y) {
    const cv::Vec3b* ra = a.ptr<cv::Vec3b>(y);
    const cv::Vec3b* rb = b.ptr<cv::Vec3b>(y);
    for (int x = 0; x < a.cols; ++x)
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(ra[x][c]) - rb[x][c];
        se += d * d;
      }
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = se / (static_cast<double>(a.rows) * a.cols * 3);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

cv::Mat luma_of(const cv::Mat& bgr) {
  cv::Mat out(bgr.size(), CV_64F);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    double* d = out.ptr<double>(y);
    for (int x = 0; x < bgr.cols; ++x)
      d[x] = 0.114 * row[x][0] + 0.587 * row[x][1] + 0.299 * row[x][2];
  }
  return out;
}

// Horizontal+vertical pass with an 11-tap Gaussian, valid region only.
cv::Mat gauss_valid(const cv::Mat& in, const std::vector<double>& k) {
  const int r = static_cast<int>(k.size()) / 2;
  cv::Mat tmp(in.rows, in.cols - 2 * r, CV_64F);
  for (int y = 0; y < in.rows; ++y)
    for (int x = 0; x < tmp.cols; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i)
        acc += k[i] * in.at<double>(y, x + static_cast<int>(i));
      tmp.at<double>(y, x) = acc;
    }
  cv::Mat out(in.rows - 2 * r, tmp.cols, CV_64F);
  for (int y = 0; y < out.rows; ++y)
    for (int x = 0; x < out.cols; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i)
        acc += k[i] * tmp.at<double>(y + static_cast<int>(i), x);
      out.at<double>(y, x) = acc;
    }
  return out;
}

}  // namespace

double ssim(const cv::Mat& a, const cv::Mat& b) {
  require(a.size() == b.size() && a.type() == b.type() && a.type() == CV_8UC3,
          "ssim: shape/type mismatch");
  require(a.rows >= 11 && a.cols >= 11, "ssim: image smaller than the window");
  const double c1 = std::pow(0.01 * 255.0, 2);
  const double c2 = std::pow(0.03 * 255.0, 2);

  std::vector<double> k(11);
  double ksum = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double d = i - 5.0;
    k[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    ksum += k[i];
  }
  for (auto& v : k) v /= ksum;

  const cv::Mat x = luma_of(a), y = luma_of(b);
  cv::Mat xx(x.size(), CV_64F), yy(x.size(), CV_64F), xy(x.size(), CV_64F);
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) {
      const double xv = x.at<double>(r, c), yv = y.at<double>(r, c);
      xx.at<double>(r, c) = xv * xv;
      yy.at<double>(r, c) = yv * yv;
      xy.at<double>(r, c) = xv * yv;
    }

  const cv::Mat mx = gauss_valid(x, k), my = gauss_valid(y, k);
  const cv::Mat mxx = gauss_valid(xx, k), myy = gauss_valid(yy, k);
  const cv::Mat mxy = gauss_valid(xy, k);

  double acc = 0.0;
  for (int r = 0; r < mx.rows; ++r)
    for (int c = 0; c < mx.cols; ++c) {
      const double ux = mx.at<double>(r, c), uy = my.at<double>(r, c);
      const double vx = mxx.at<double>(r, c) - ux * ux;
      const double vy = myy.at<double>(r, c) - uy * uy;
      const double vxy = mxy.at<double>(r, c) - ux * uy;
      acc += ((2 * ux * uy + c1) * (2 * vxy + c2)) /
             ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
  return acc / (static_cast<double>(mx.rows) * mx.cols);
}

}  // namespace ganbench::metrics
