#pragma once

#include <opencv2/core.hpp>

namespace ganbench::spectral {

// Mean squared DFT magnitude of the luma plane over the radial band
// [lo, hi] in cycles/pixel (Nyquist = 0.5). The default band is
// "above 3/4 Nyquist", where GAN-style fingerprints live.
double band_energy(const cv::Mat& bgr, double lo = 0.375, double hi = 1.0);

// Same, for a single-channel double image.
double band_energy_1d(const cv::Mat& plane, double lo = 0.375,
                      double hi = 1.0);

// Zero-phase band-pass of a single-channel double image, output scaled
// to unit RMS. Used to synthesise band-limited noise signatures.
cv::Mat bandpass_unit_rms(const cv::Mat& plane, double lo, double hi);

}  // namespace ganbench::spectral
