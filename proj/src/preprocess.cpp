#include "ganbench/preprocess.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <opencv2/imgproc.hpp>
#include <sstream>

#include "ganbench/error.hpp"

namespace fs = std::filesystem;

namespace ganbench::preprocess {

namespace {
cv::Point2f mean_of(const std::array<cv::Point2f, 68>& pts, int from, int to) {
  cv::Point2f acc(0, 0);
  for (int i = from; i <= to; ++i) acc += pts[i];
  return acc * (1.0f / static_cast<float>(to - from + 1));
}
}  // namespace

cv::Point2f LandmarkSet::left_eye_center() const {
  return mean_of(points, 36, 41);
}
cv::Point2f LandmarkSet::right_eye_center() const {
  return mean_of(points, 42, 47);
}

void AlignmentTarget::validate() const {
  require(output_size > 0, "alignment target: output_size must be positive");
  require(std::abs(left_eye.y - right_eye.y) < 1e-4f,
          "alignment target: eye anchors must share a row");
  const float cx = static_cast<float>(output_size) / 2.0f;
  require(std::abs((cx - left_eye.x) - (right_eye.x - cx)) < 1e-4f,
          "alignment target: anchors must be symmetric about the centre");
  require(right_eye.x > left_eye.x, "alignment target: anchors swapped");
}

double yaw_asymmetry(const LandmarkSet& lms) {
  const cv::Point2f nose = lms.nose_tip();
  const cv::Point2f l = lms.left_eye_center();
  const cv::Point2f r = lms.right_eye_center();
  const double iod = cv::norm(r - l);
  require(iod > 1e-6, "degenerate landmarks: coincident eye centers");
  return std::abs(cv::norm(nose - l) - cv::norm(nose - r)) / iod;
}

bool estimate_frontal(const LandmarkSet& lms, double threshold) {
  return yaw_asymmetry(lms) <= threshold;
}

cv::Mat align_face(const cv::Mat& image, const LandmarkSet& lms,
                   const AlignmentTarget& target) {
  target.validate();
  require(image.type() == CV_8UC3, "align_face: expected CV_8UC3");
  const cv::Point2f l = lms.left_eye_center();
  const cv::Point2f r = lms.right_eye_center();
  require(cv::norm(r - l) > 1e-3, "align_face: coincident eye centers");

  // Complex ratio (R-L)_dst / (r-l)_src gives scale and rotation.
  const std::complex<double> src(r.x - l.x, r.y - l.y);
  const std::complex<double> dst(target.right_eye.x - target.left_eye.x,
                                 target.right_eye.y - target.left_eye.y);
  const std::complex<double> m = dst / src;
  const double a = m.real(), b = m.imag();
  const double tx = target.left_eye.x - (a * l.x - b * l.y);
  const double ty = target.left_eye.y - (b * l.x + a * l.y);
  cv::Mat warp = (cv::Mat_<double>(2, 3) << a, -b, tx, b, a, ty);

  cv::Mat out;
  cv::warpAffine(image, out, warp,
                 cv::Size(target.output_size, target.output_size),
                 cv::INTER_LINEAR, cv::BORDER_REPLICATE);
  return out;
}

std::string ExclusionReport::to_text() const {
  std::ostringstream os;
  os << "inputs\t" << input_count << "\n";
  os << "outputs\t" << output_count << "\n";
  for (const auto& [reason, count] : reasons)
    os << "excluded_" << reason << "\t" << count << "\n";
  return os.str();
}

data::Manifest preprocess_corpus(const data::Manifest& in,
                                 const std::string& out_root,
                                 const PreprocessOptions& opts,
                                 ExclusionReport* report) {
  auto backend = make_landmark_backend(opts.backend);
  fs::create_directories(out_root);

  data::Manifest out;
  out.root = out_root;
  ExclusionReport rep;
  rep.input_count = static_cast<int>(in.size());

  for (const auto& e : in.entries) {
    cv::Mat img = load_image(in.resolve(e));
    auto lms = backend->detect(img);
    if (!lms) {
      ++rep.reasons["no_face"];
      continue;
    }
    if (!estimate_frontal(*lms, opts.frontal_threshold)) {
      ++rep.reasons["non_frontal"];
      continue;
    }
    cv::Mat aligned;
    try {
      aligned = align_face(img, *lms, opts.target);
    } catch (const Error&) {
      ++rep.reasons["degenerate_landmarks"];
      continue;
    }

    fs::path rel(e.path);
    rel.replace_extension(".png");
    const fs::path dst = fs::path(out_root) / rel;
    fs::create_directories(dst.parent_path());
    save_png(dst.string(), aligned);

    data::Entry oe = e;
    oe.path = rel.generic_string();
    out.entries.push_back(std::move(oe));
    ++rep.output_count;
  }

  if (report) *report = rep;
  return out;
}

}  // namespace ganbench::preprocess
