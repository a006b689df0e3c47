#include <algorithm>
#include <cmath>
#include <opencv2/imgproc.hpp>
#include <optional>
#include <vector>

#include "ganbench/error.hpp"
#include "ganbench/preprocess.hpp"

namespace ganbench::preprocess {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline int luma(const cv::Vec3b& bgr) {
  return static_cast<int>(0.114 * bgr[0] + 0.587 * bgr[1] + 0.299 * bgr[2]);
}

inline bool is_skin(const cv::Vec3b& bgr) {
  const int b = bgr[0], g = bgr[1], r = bgr[2];
  return r > g + 10 && g > b + 6 && r > 80;
}

cv::Mat skin_mask(const cv::Mat& img) {
  cv::Mat mask(img.size(), CV_8UC1, cv::Scalar(0));
  for (int y = 0; y < img.rows; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    uchar* m = mask.ptr<uchar>(y);
    for (int x = 0; x < img.cols; ++x)
      if (is_skin(row[x])) m[x] = 255;
  }
  return mask;
}

// Face mask with interior holes (eyes, brows, nostrils, mouth) filled.
cv::Mat fill_holes(const cv::Mat& mask) {
  cv::Mat inv;
  cv::bitwise_not(mask, inv);
  cv::Mat ff = inv.clone();
  cv::floodFill(ff, cv::Point(0, 0), 0);
  cv::Mat filled;
  cv::bitwise_or(mask, ff, filled);
  return filled;
}

struct Blob {
  double cx = 0, cy = 0;
  int area = 0;
  cv::Rect box;
};

std::vector<Blob> blobs_of(const cv::Mat& mask, int min_area) {
  cv::Mat labels, stats, centroids;
  const int n = cv::connectedComponentsWithStats(mask, labels, stats,
                                                 centroids, 8, CV_32S);
  std::vector<Blob> out;
  for (int i = 1; i < n; ++i) {
    Blob b;
    b.area = stats.at<int>(i, cv::CC_STAT_AREA);
    if (b.area < min_area) continue;
    b.cx = centroids.at<double>(i, 0);
    b.cy = centroids.at<double>(i, 1);
    b.box = cv::Rect(stats.at<int>(i, cv::CC_STAT_LEFT),
                     stats.at<int>(i, cv::CC_STAT_TOP),
                     stats.at<int>(i, cv::CC_STAT_WIDTH),
                     stats.at<int>(i, cv::CC_STAT_HEIGHT));
    out.push_back(b);
  }
  return out;
}

bool has_white_neighbour(const cv::Mat& img, const Blob& b) {
  const cv::Rect probe =
      (b.box + cv::Size(16, 16)) - cv::Point(8, 8);
  const cv::Rect r = probe & cv::Rect(0, 0, img.cols, img.rows);
  int count = 0;
  for (int y = r.y; y < r.y + r.height; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = r.x; x < r.x + r.width; ++x) {
      const int lo = std::min({row[x][0], row[x][1], row[x][2]});
      const int hi = std::max({row[x][0], row[x][1], row[x][2]});
      if (lo > 150 && hi - lo < 55 && ++count >= 6) return true;
    }
  }
  return false;
}

struct EyeGeom {
  cv::Point2f center;
  float half_w = 0, half_h = 0;
};

// The eye is the skin-mask hole that contains the pupil blob: its
// moments give a sub-pixel centre and extent.
std::optional<EyeGeom> eye_from_hole(const cv::Mat& holes,
                                     const cv::Point2f& pupil) {
  cv::Mat labels;
  const int n = cv::connectedComponents(holes, labels, 8, CV_32S);
  const cv::Point p(static_cast<int>(std::lround(pupil.x)),
                    static_cast<int>(std::lround(pupil.y)));
  if (p.x < 0 || p.y < 0 || p.x >= holes.cols || p.y >= holes.rows)
    return std::nullopt;
  const int lbl = labels.at<int>(p);
  if (lbl == 0 || n <= 1) return std::nullopt;
  double sx = 0, sy = 0, cnt = 0;
  int x0 = holes.cols, x1 = 0, y0 = holes.rows, y1 = 0;
  for (int y = 0; y < holes.rows; ++y) {
    const int* row = labels.ptr<int>(y);
    for (int x = 0; x < holes.cols; ++x)
      if (row[x] == lbl) {
        sx += x;
        sy += y;
        cnt += 1;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
  }
  if (cnt < 8) return std::nullopt;
  EyeGeom g;
  g.center = cv::Point2f(static_cast<float>(sx / cnt),
                         static_cast<float>(sy / cnt));
  g.half_w = (x1 - x0 + 1) / 2.0f;
  g.half_h = (y1 - y0 + 1) / 2.0f;
  return g;
}

void put_ellipse(std::array<cv::Point2f, 68>& pts, int first,
                 const cv::Point2f& c, float a, float b,
                 const std::vector<double>& angles_deg) {
  for (std::size_t i = 0; i < angles_deg.size(); ++i) {
    const double t = angles_deg[i] * kPi / 180.0;
    pts[first + static_cast<int>(i)] =
        cv::Point2f(c.x + a * static_cast<float>(std::cos(t)),
                    c.y - b * static_cast<float>(std::sin(t)));
  }
}

class GeometricFaceBackend final : public LandmarkBackend {
 public:
  std::optional<LandmarkSet> detect(const cv::Mat& image) override;
  std::string name() const override { return "geometric"; }
};

std::optional<LandmarkSet> GeometricFaceBackend::detect(const cv::Mat& image) {
  require(image.type() == CV_8UC3, "landmark detection: expected CV_8UC3");
  const cv::Mat skin = skin_mask(image);

  // Largest sufficiently big skin component wins (portrait corpora).
  cv::Mat labels, stats, centroids;
  const int ncc = cv::connectedComponentsWithStats(skin, labels, stats,
                                                   centroids, 8, CV_32S);
  int face_lbl = -1, face_area = 0;
  for (int i = 1; i < ncc; ++i) {
    const int area = stats.at<int>(i, cv::CC_STAT_AREA);
    if (area >= 1500 && area > face_area) {
      face_area = area;
      face_lbl = i;
    }
  }
  if (face_lbl < 0) return std::nullopt;

  cv::Mat face_mask = (labels == face_lbl);
  const cv::Rect face_box(stats.at<int>(face_lbl, cv::CC_STAT_LEFT),
                          stats.at<int>(face_lbl, cv::CC_STAT_TOP),
                          stats.at<int>(face_lbl, cv::CC_STAT_WIDTH),
                          stats.at<int>(face_lbl, cv::CC_STAT_HEIGHT));
  const cv::Mat filled = fill_holes(face_mask);
  cv::Mat holes;
  cv::bitwise_and(filled, ~face_mask, holes);

  // Pupil candidates: dark, roundish, sclera nearby, interior to the face.
  cv::Mat dark(image.size(), CV_8UC1, cv::Scalar(0));
  for (int y = 0; y < image.rows; ++y) {
    const cv::Vec3b* row = image.ptr<cv::Vec3b>(y);
    const uchar* in = filled.ptr<uchar>(y);
    uchar* d = dark.ptr<uchar>(y);
    for (int x = 0; x < image.cols; ++x)
      if (in[x] && luma(row[x]) < 90) d[x] = 255;
  }
  std::vector<Blob> pupils;
  for (const auto& b : blobs_of(dark, 3)) {
    if (b.area > 400) continue;
    const double aspect = static_cast<double>(std::max(b.box.width, b.box.height)) /
                          std::max(1, std::min(b.box.width, b.box.height));
    if (aspect > 2.2) continue;
    if (b.cy > face_box.y + 0.65 * face_box.height) continue;
    if (!has_white_neighbour(image, b)) continue;
    pupils.push_back(b);
  }
  if (pupils.size() < 2) return std::nullopt;

  // Best horizontal pair.
  int bi = -1, bj = -1;
  double best_score = -1;
  for (std::size_t i = 0; i < pupils.size(); ++i)
    for (std::size_t j = i + 1; j < pupils.size(); ++j) {
      const double dy = std::abs(pupils[i].cy - pupils[j].cy);
      const double dx = std::abs(pupils[i].cx - pupils[j].cx);
      if (dy > 0.12 * face_box.height) continue;
      if (dx < 0.22 * face_box.width || dx > 0.75 * face_box.width) continue;
      const double score = pupils[i].area + pupils[j].area - 4.0 * dy;
      if (score > best_score) {
        best_score = score;
        bi = static_cast<int>(i);
        bj = static_cast<int>(j);
      }
    }
  if (bi < 0) return std::nullopt;
  const Blob& pl = pupils[bi].cx < pupils[bj].cx ? pupils[bi] : pupils[bj];
  const Blob& pr = pupils[bi].cx < pupils[bj].cx ? pupils[bj] : pupils[bi];

  auto left_eye = eye_from_hole(holes, cv::Point2f(static_cast<float>(pl.cx),
                                                   static_cast<float>(pl.cy)));
  auto right_eye = eye_from_hole(holes, cv::Point2f(static_cast<float>(pr.cx),
                                                    static_cast<float>(pr.cy)));
  if (!left_eye || !right_eye) return std::nullopt;
  const float iod = static_cast<float>(
      cv::norm(right_eye->center - left_eye->center));
  if (iod < 8) return std::nullopt;
  const cv::Point2f mid_eyes = (left_eye->center + right_eye->center) * 0.5f;

  // Mouth: the reddish blob below the eyes.
  cv::Mat lips(image.size(), CV_8UC1, cv::Scalar(0));
  for (int y = 0; y < image.rows; ++y) {
    const cv::Vec3b* row = image.ptr<cv::Vec3b>(y);
    const uchar* in = filled.ptr<uchar>(y);
    uchar* d = lips.ptr<uchar>(y);
    for (int x = 0; x < image.cols; ++x)
      if (in[x] && row[x][2] > 100 && row[x][2] > row[x][1] + 45) d[x] = 255;
  }
  Blob mouth;
  bool mouth_found = false;
  for (const auto& b : blobs_of(lips, 25))
    if (b.cy > mid_eyes.y + 0.8f * iod && b.area > mouth.area) {
      mouth = b;
      mouth_found = true;
    }
  if (!mouth_found) return std::nullopt;
  const cv::Point2f mouth_c(static_cast<float>(mouth.cx),
                            static_cast<float>(mouth.cy));

  // Nostrils: small dark blobs between the eye line and the mouth.
  std::vector<const Blob*> nostrils;
  for (const auto& b : blobs_of(dark, 2)) {
    if (b.area > 120) continue;
    if (b.cy < mid_eyes.y + 0.35f * (mouth_c.y - mid_eyes.y)) continue;
    if (b.cy > mouth_c.y - 0.2f * (mouth_c.y - mid_eyes.y)) continue;
    if (std::abs(b.cx - mouth_c.x) > 0.8 * iod) continue;
    nostrils.push_back(&b);
  }
  cv::Point2f nose_base;
  if (!nostrils.empty()) {
    std::sort(nostrils.begin(), nostrils.end(),
              [](const Blob* a, const Blob* b) { return a->area > b->area; });
    if (nostrils.size() > 2) nostrils.resize(2);
    cv::Point2f acc(0, 0);
    for (const auto* b : nostrils)
      acc += cv::Point2f(static_cast<float>(b->cx), static_cast<float>(b->cy));
    nose_base = acc * (1.0f / static_cast<float>(nostrils.size()));
  } else {
    nose_base = cv::Point2f(0.4f * mid_eyes.x + 0.6f * mouth_c.x,
                            mid_eyes.y + 0.62f * (mouth_c.y - mid_eyes.y));
  }
  const cv::Point2f nose_tip(nose_base.x,
                             nose_base.y - 0.12f * (mouth_c.y - mid_eyes.y));

  LandmarkSet out;
  auto& pts = out.points;

  // Jaw: ray casting on the filled face mask, left ear to right ear.
  cv::Moments fm = cv::moments(filled, true);
  const cv::Point2f fc(static_cast<float>(fm.m10 / fm.m00),
                       static_cast<float>(fm.m01 / fm.m00));
  const double max_r = std::hypot(image.cols, image.rows);
  for (int i = 0; i <= 16; ++i) {
    const double phi = (180.0 - 11.25 * i) * kPi / 180.0;
    const double dx = std::cos(phi), dy = std::sin(phi);
    cv::Point2f hit = fc;
    for (double r = 1; r < max_r; r += 1.0) {
      const int x = static_cast<int>(std::lround(fc.x + r * dx));
      const int y = static_cast<int>(std::lround(fc.y + r * dy));
      if (x < 0 || y < 0 || x >= image.cols || y >= image.rows) break;
      if (filled.at<uchar>(y, x))
        hit = cv::Point2f(static_cast<float>(x), static_cast<float>(y));
    }
    pts[i] = hit;
  }

  // Brows: wide, thin dark blobs right above each eye; parametric arc
  // as fallback.
  auto brow_points = [&](const EyeGeom& eye, int first) {
    const Blob* best = nullptr;
    for (const auto& b : blobs_of(dark, 6)) {
      if (b.box.width < 2 * b.box.height) continue;
      if (b.cy > eye.center.y - 0.5 * eye.half_h) continue;
      if (b.cy < eye.center.y - 4.5 * eye.half_h) continue;
      if (std::abs(b.cx - eye.center.x) > 1.6 * eye.half_w) continue;
      if (!best || b.area > best->area) best = &b;
    }
    if (best) {
      for (int i = 0; i < 5; ++i) {
        const float fx = best->box.x + best->box.width * (0.1f + 0.2f * i);
        const float arch =
            -0.25f * best->box.height *
            (1.0f - std::abs(i - 2.0f) / 2.0f);
        pts[first + i] = cv::Point2f(fx, static_cast<float>(best->cy) + arch);
      }
    } else {
      put_ellipse(pts, first, eye.center - cv::Point2f(0, 2.2f * eye.half_h),
                  1.3f * eye.half_w, 0.4f * eye.half_h,
                  {150, 120, 90, 60, 30});
    }
  };
  brow_points(*left_eye, 17);
  brow_points(*right_eye, 22);

  // Nose bridge 27-30 and base 31-35.
  for (int i = 0; i < 4; ++i) {
    const float t = 0.25f * (i + 1);
    pts[27 + i] = mid_eyes + t * (nose_tip - mid_eyes);
  }
  const float nose_w = 0.22f * iod;
  for (int i = 0; i < 5; ++i)
    pts[31 + i] = cv::Point2f(nose_base.x + nose_w * (i - 2) / 2.0f,
                              nose_base.y + (i == 2 ? 1.5f : 0.0f));

  // Eyes 36-47: hexagons from the measured hole geometry.
  const std::vector<double> hexa{180, 120, 60, 0, 300, 240};
  put_ellipse(pts, 36, left_eye->center, 0.95f * left_eye->half_w,
              0.8f * left_eye->half_h, hexa);
  put_ellipse(pts, 42, right_eye->center, 0.95f * right_eye->half_w,
              0.8f * right_eye->half_h, hexa);

  // Mouth 48-67.
  const float mw = mouth.box.width / 2.0f, mh = mouth.box.height / 2.0f;
  put_ellipse(pts, 48, mouth_c, mw, mh,
              {180, 150, 120, 90, 60, 30, 0, 330, 300, 270, 240, 210});
  put_ellipse(pts, 60, mouth_c, 0.6f * mw, 0.45f * mh,
              {180, 135, 90, 45, 0, 315, 270, 225});

  for (auto& p : pts) {
    p.x = std::clamp(p.x, 0.0f, static_cast<float>(image.cols - 1));
    p.y = std::clamp(p.y, 0.0f, static_cast<float>(image.rows - 1));
  }
  return out;
}

}  // namespace

std::unique_ptr<LandmarkBackend> make_landmark_backend(
    const std::string& name) {
  if (name == "geometric") return std::make_unique<GeometricFaceBackend>();
  fail("unknown landmark backend: ", name);
}

}  // namespace ganbench::preprocess
