#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <opencv2/core.hpp>

#include "ganbench/datamodel.hpp"
#include "ganbench/image.hpp"

namespace ganbench::preprocess {

// 68 points in iBUG ordering: jaw 0-16, brows 17-26, nose 27-35,
// eyes 36-47 (36-41 image-left, 42-47 image-right), mouth 48-67.
struct LandmarkSet {
  std::array<cv::Point2f, 68> points;

  cv::Point2f left_eye_center() const;   // mean of 36..41
  cv::Point2f right_eye_center() const;  // mean of 42..47
  cv::Point2f nose_tip() const { return points[30]; }
};

struct AlignmentTarget {
  int output_size = 224;
  cv::Point2f left_eye{78.0f, 90.0f};
  cv::Point2f right_eye{146.0f, 90.0f};

  void validate() const;
};

// Any 68-point detector conforming to the iBUG ordering can sit behind
// this interface. The built-in "geometric" backend locates faces in
// portrait-style imagery from pixel evidence (skin region, pupil blobs,
// lip blob); it is what the desk-scale corpora use.
class LandmarkBackend {
 public:
  virtual ~LandmarkBackend() = default;
  virtual std::optional<LandmarkSet> detect(const cv::Mat& image) = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<LandmarkBackend> make_landmark_backend(
    const std::string& name = "geometric");

// Yaw proxy: |d(nose_tip, left_eye) - d(nose_tip, right_eye)| divided by
// the inter-ocular distance.
double yaw_asymmetry(const LandmarkSet& lms);
bool estimate_frontal(const LandmarkSet& lms, double threshold = 0.15);

// Similarity transform (rotation + uniform scale + translation) taking
// the eye centers onto the target anchors, bilinear resampling.
cv::Mat align_face(const cv::Mat& image, const LandmarkSet& lms,
                   const AlignmentTarget& target);

struct ExclusionReport {
  std::map<std::string, int> reasons;  // "no_face", "non_frontal", ...
  int input_count = 0;
  int output_count = 0;

  std::string to_text() const;
};

struct PreprocessOptions {
  AlignmentTarget target;
  double frontal_threshold = 0.15;
  std::string backend = "geometric";
};

// detect -> frontal gate -> align for every entry; aligned PNGs are
// written under out_root mirroring the subject layout.
data::Manifest preprocess_corpus(const data::Manifest& in,
                                 const std::string& out_root,
                                 const PreprocessOptions& opts,
                                 ExclusionReport* report);

}  // namespace ganbench::preprocess
