#pragma once

#include <opencv2/core.hpp>
#include <utility>
#include <vector>

namespace ganbench::metrics {

// Scores are oriented higher = more likely fake. All rates in percent.
//
// EER: false-positive rate (real scored >= t) equals false-negative rate
// (fake scored < t). Both rates are step functions of t; the crossing is
// found on the threshold sweep and linearly interpolated. Returns
// (eer_pct, threshold).
std::pair<double, double> compute_eer(const std::vector<double>& real_scores,
                                      const std::vector<double>& fake_scores);

// R_real = fraction of real scored < t; R_fake = fraction of fake
// scored >= t. In percent.
std::pair<double, double> compute_recalls(
    const std::vector<double>& real_scores,
    const std::vector<double>& fake_scores, double threshold);

// Mann-Whitney statistic normalised by |real|*|fake|, ties at 1/2. Percent.
double compute_auc(const std::vector<double>& real_scores,
                   const std::vector<double>& fake_scores);

// 10*log10(255^2 / MSE) over all channels jointly; +inf when identical.
double psnr_db(const cv::Mat& a, const cv::Mat& b);

// Mean SSIM on the luma plane: 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range 255, valid windows only.
double ssim(const cv::Mat& a, const cv::Mat& b);

}  // namespace ganbench::metrics
