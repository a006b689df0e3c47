#include "ganbench/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <opencv2/imgproc.hpp>

#include "ganbench/error.hpp"
#include "ganbench/metrics.hpp"
#include "ganbench/rng.hpp"
#include "ganbench/spectral.hpp"

namespace fs = std::filesystem;

namespace ganbench::proxy {

std::string to_string(FingerprintKind k) {
  return k == FingerprintKind::PERIODIC_HF ? "PERIODIC_HF" : "NOISE_SIGNATURE";
}

FingerprintKind fingerprint_from_string(const std::string& s) {
  if (s == "PERIODIC_HF" || s == "periodic_hf") return FingerprintKind::PERIODIC_HF;
  if (s == "NOISE_SIGNATURE" || s == "noise_signature")
    return FingerprintKind::NOISE_SIGNATURE;
  fail("unknown fingerprint kind: ", s);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double uni(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(Rng& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

// Colour palette constraints keep the geometric landmark backend honest:
// skin satisfies r > g+10, g > b+6; hair/brows/iris/lips/background all
// violate it, so facial features read as holes in the skin region.
struct Style {
  cv::Scalar skin, hair, iris, lip, bg1, bg2;
  bool bald = false;
  double face_a, face_b;       // ellipse semi-axes
  double iod;                  // inter-ocular distance
  double eye_hw, eye_hh;       // sclera half extents
  double iris_r, pupil_r, highlight_r;
  double brow_dy, brow_hw, brow_th, brow_arch;
  double mouth_hw, mouth_hh;
  double mouth_drop;           // mouth centre below face centre, in face_b
  double eye_drop;             // eye line above face centre, in face_b
  double nose_t;               // nostril line between eyes and mouth
  double nostril_sep, nostril_r;
  double hairline;             // in face_b above centre
  double hair_grow;
};

Style sample_style(Rng& rng, bool bald) {
  Style s;
  const double r = uni(rng, 172, 214);
  const double g = r - uni(rng, 24, 46);
  const double b = g - uni(rng, 16, 38);
  s.skin = cv::Scalar(b, g, r);

  const double hv = uni(rng, 30, 72);
  s.hair = cv::Scalar(hv + uni(rng, -4, 10), hv, hv + uni(rng, 0, 7));

  const int iris_pick = pick(rng, 4);
  const cv::Scalar iris_base[4] = {
      {150, 95, 60}, {130, 120, 112}, {75, 115, 88}, {45, 62, 70}};
  s.iris = iris_base[iris_pick];
  for (int c = 0; c < 3; ++c) s.iris[c] += uni(rng, -8, 8);
  s.iris[2] = std::min(s.iris[2], s.iris[1] + 8.0);  // never skin-like

  const double lb = uni(rng, 78, 98);
  s.lip = cv::Scalar(lb, lb - uni(rng, 6, 16), uni(rng, 150, 185));

  const double bgv = uni(rng, 70, 190);
  s.bg1 = cv::Scalar(bgv + uni(rng, 10, 45), bgv, bgv - uni(rng, 5, 30));
  const double bgv2 = uni(rng, 60, 185);
  s.bg2 = cv::Scalar(bgv2 + uni(rng, 10, 45), bgv2, bgv2 - uni(rng, 5, 30));

  s.bald = bald;
  s.face_a = uni(rng, 58, 72);
  s.face_b = uni(rng, 78, 92);
  s.iod = uni(rng, 0.72, 0.84) * s.face_a;
  s.eye_hw = uni(rng, 0.20, 0.24) * s.iod;
  s.eye_hh = uni(rng, 0.52, 0.62) * s.eye_hw;
  s.iris_r = uni(rng, 0.78, 0.92) * s.eye_hh;
  s.pupil_r = uni(rng, 0.40, 0.50) * s.iris_r;
  s.highlight_r = 0.33 * s.iris_r;
  s.brow_dy = uni(rng, 2.2, 2.8) * s.eye_hh + 3.0;
  s.brow_hw = uni(rng, 1.25, 1.45) * s.eye_hw;
  s.brow_th = uni(rng, 2.4, 3.4);
  s.brow_arch = uni(rng, 2.0, 4.0);
  s.mouth_hw = uni(rng, 0.27, 0.34) * s.iod;
  s.mouth_hh = uni(rng, 0.10, 0.14) * s.iod;
  s.mouth_drop = uni(rng, 0.42, 0.50);
  s.eye_drop = uni(rng, 0.20, 0.26);
  s.nose_t = uni(rng, 0.56, 0.62);
  s.nostril_sep = uni(rng, 0.15, 0.19) * s.iod;
  s.nostril_r = uni(rng, 1.3, 1.8);
  s.hairline = uni(rng, 0.50, 0.62);
  s.hair_grow = uni(rng, 7, 14);
  return s;
}

struct Jitter {
  double yaw = 0.0;
  double gain = 1.0;
  double grad = 0.0;
  double dx = 0.0, dy = 0.0;
  double mouth_open = 1.0;
  double brow_raise = 0.0;
  std::uint64_t noise_seed = 0;
};

Jitter sample_jitter(Rng& rng, double yaw) {
  Jitter j;
  j.yaw = yaw;
  j.gain = uni(rng, 0.93, 1.07);
  j.grad = uni(rng, -0.04, 0.04);
  j.dx = uni(rng, -4, 4);
  j.dy = uni(rng, -4, 4);
  j.mouth_open = uni(rng, 0.85, 1.25);
  j.brow_raise = uni(rng, -2, 2);
  j.noise_seed = rng();
  return j;
}

cv::Point fpt(double x, double y) {
  return {static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))};
}

void put_hex(std::array<cv::Point2f, 68>& pts, int first, cv::Point2f c,
             float a, float b) {
  static const double ang[6] = {180, 120, 60, 0, 300, 240};
  for (int i = 0; i < 6; ++i) {
    const double t = ang[i] * kPi / 180.0;
    pts[first + i] = {c.x + a * static_cast<float>(std::cos(t)),
                      c.y - b * static_cast<float>(std::sin(t))};
  }
}

void put_ell(std::array<cv::Point2f, 68>& pts, int first, cv::Point2f c,
             float a, float b, const std::vector<double>& ang) {
  for (std::size_t i = 0; i < ang.size(); ++i) {
    const double t = ang[i] * kPi / 180.0;
    pts[first + static_cast<int>(i)] = {
        c.x + a * static_cast<float>(std::cos(t)),
        c.y - b * static_cast<float>(std::sin(t))};
  }
}

}  // namespace

RenderedFace render_face(std::uint64_t subject_seed, std::uint64_t image_seed,
                         const RenderOptions& opts) {
  require(opts.canvas >= 192, "render canvas too small");
  auto srng = make_rng(subject_seed, 11);
  Style st = sample_style(srng, opts.bald);
  auto jrng = make_rng(image_seed, 12);
  Jitter jt = sample_jitter(jrng, opts.yaw);

  const double S = opts.canvas / 256.0;
  const double cx = (128.0 + jt.dx + jt.yaw * 0.10 * st.iod) * S;
  const double cy = (134.0 + jt.dy) * S;
  const double fa = st.face_a * S, fb = st.face_b * S;
  const double iod = st.iod * S;

  const double eye_y = cy - st.eye_drop * fb;
  const double mouth_y = cy + st.mouth_drop * fb;
  const double eye_shift = jt.yaw * 0.18 * iod;
  const double lex = cx - iod / 2.0 + eye_shift;
  const double rex = cx + iod / 2.0 + eye_shift;
  const double lw = st.eye_hw * S * (1.0 - 0.25 * std::max(0.0, jt.yaw));
  const double rw = st.eye_hw * S * (1.0 - 0.25 * std::max(0.0, -jt.yaw));
  const double eh = st.eye_hh * S;

  const double nose_shift = jt.yaw * 0.85 * iod;
  const double mouth_shift = jt.yaw * 0.55 * iod;
  const double nose_x = cx + nose_shift;
  const double nose_base_y = eye_y + st.nose_t * (mouth_y - eye_y);
  const double mouth_x = cx + mouth_shift;
  const double mouth_hh = st.mouth_hh * S * jt.mouth_open;
  const double mouth_hw = st.mouth_hw * S;

  cv::Mat img(opts.canvas, opts.canvas, CV_8UC3);
  for (int y = 0; y < img.rows; ++y) {
    const double t = static_cast<double>(y) / (img.rows - 1);
    cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x) {
      const double u = 0.85 * t + 0.15 * x / (img.cols - 1);
      for (int c = 0; c < 3; ++c)
        row[x][c] = cv::saturate_cast<uchar>(st.bg1[c] * (1 - u) +
                                             st.bg2[c] * u);
    }
  }

  // Hair behind the face, then the skin ellipse, then the cap overlay.
  const double hairline_y = cy - st.hairline * fb;
  if (!st.bald) {
    cv::ellipse(img, fpt(cx, cy - 2 * S),
                cv::Size(static_cast<int>(fa + st.hair_grow * S),
                         static_cast<int>(fb + st.hair_grow * 0.8 * S)),
                0, 0, 360, st.hair, cv::FILLED, cv::LINE_AA);
  }
  cv::ellipse(img, fpt(cx, cy), cv::Size(static_cast<int>(fa),
                                         static_cast<int>(fb)),
              0, 0, 360, st.skin, cv::FILLED, cv::LINE_AA);
  if (!st.bald) {
    cv::Mat cap(img.size(), CV_8UC1, cv::Scalar(0));
    cv::ellipse(cap, fpt(cx, cy), cv::Size(static_cast<int>(fa + 2 * S),
                                           static_cast<int>(fb + 2 * S)),
                0, 0, 360, 255, cv::FILLED, cv::LINE_AA);
    cap.rowRange(static_cast<int>(std::max(0.0, hairline_y)), cap.rows) = 0;
    img.setTo(st.hair, cap);
  }

  // Nose shading wedge and nostrils.
  {
    cv::Scalar shade(st.skin[0] * 0.93, st.skin[1] * 0.93, st.skin[2] * 0.93);
    const cv::Point poly[4] = {
        fpt(cx + jt.yaw * 0.3 * iod - 1.5 * S, eye_y + 2 * S),
        fpt(cx + jt.yaw * 0.3 * iod + 1.5 * S, eye_y + 2 * S),
        fpt(nose_x + 2.5 * S, nose_base_y - 2 * S),
        fpt(nose_x - 2.5 * S, nose_base_y - 2 * S)};
    cv::fillConvexPoly(img, poly, 4, shade, cv::LINE_AA);
    cv::Scalar noz(st.skin[0] * 0.42 + 8, st.skin[1] * 0.40,
                   st.skin[2] * 0.40);
    cv::circle(img, fpt(nose_x - st.nostril_sep * S, nose_base_y),
               static_cast<int>(std::lround(st.nostril_r * S)), noz,
               cv::FILLED, cv::LINE_AA);
    cv::circle(img, fpt(nose_x + st.nostril_sep * S, nose_base_y),
               static_cast<int>(std::lround(st.nostril_r * S)), noz,
               cv::FILLED, cv::LINE_AA);
  }

  // Eyes.
  auto draw_eye = [&](double ex, double half_w) {
    cv::ellipse(img, fpt(ex, eye_y),
                cv::Size(static_cast<int>(std::lround(half_w)),
                         static_cast<int>(std::lround(eh))),
                0, 0, 360, cv::Scalar(236, 236, 234), cv::FILLED, cv::LINE_AA);
    cv::circle(img, fpt(ex, eye_y),
               static_cast<int>(std::lround(st.iris_r * S)), st.iris,
               cv::FILLED, cv::LINE_AA);
    cv::circle(img, fpt(ex, eye_y),
               static_cast<int>(std::lround(st.pupil_r * S)),
               cv::Scalar(25, 22, 22), cv::FILLED, cv::LINE_AA);
    cv::circle(img,
               fpt(ex - 0.4 * st.pupil_r * S, eye_y - 0.4 * st.pupil_r * S),
               std::max(1, static_cast<int>(std::lround(st.highlight_r * S))),
               cv::Scalar(250, 250, 250), cv::FILLED, cv::LINE_AA);
  };
  draw_eye(lex, lw);
  draw_eye(rex, rw);

  // Brows.
  const double brow_y = eye_y - st.brow_dy * S + jt.brow_raise * S;
  auto draw_brow = [&](double ex) {
    cv::ellipse(img, fpt(ex, brow_y),
                cv::Size(static_cast<int>(std::lround(st.brow_hw * S)),
                         static_cast<int>(std::lround(st.brow_arch * S))),
                0, 180, 360, st.hair,
                static_cast<int>(std::lround(st.brow_th * S)), cv::LINE_AA);
  };
  draw_brow(lex);
  draw_brow(rex);

  // Mouth.
  cv::ellipse(img, fpt(mouth_x, mouth_y),
              cv::Size(static_cast<int>(std::lround(mouth_hw)),
                       static_cast<int>(std::lround(mouth_hh))),
              0, 0, 360, st.lip, cv::FILLED, cv::LINE_AA);
  cv::line(img, fpt(mouth_x - mouth_hw * 0.8, mouth_y),
           fpt(mouth_x + mouth_hw * 0.8, mouth_y),
           cv::Scalar(st.lip[0] * 0.7, st.lip[1] * 0.7, st.lip[2] * 0.7),
           std::max(1, static_cast<int>(S)), cv::LINE_AA);

  // Lighting (gain + vertical gradient), low-frequency texture, dither.
  auto nrng = make_rng(jt.noise_seed, 13);
  cv::Mat grid(9, 9, CV_64F);
  for (int i = 0; i < 81; ++i)
    grid.at<double>(i / 9, i % 9) = uni(nrng, -6, 6);
  cv::Mat lowfreq;
  cv::resize(grid, lowfreq, img.size(), 0, 0, cv::INTER_LINEAR);
  std::uniform_real_distribution<double> dither(-1.0, 1.0);
  for (int y = 0; y < img.rows; ++y) {
    const double g =
        jt.gain * (1.0 + jt.grad * (static_cast<double>(y) / img.rows - 0.5));
    cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    const double* lf = lowfreq.ptr<double>(y);
    for (int x = 0; x < img.cols; ++x)
      for (int c = 0; c < 3; ++c)
        row[x][c] = cv::saturate_cast<uchar>(row[x][c] * g + lf[x] +
                                             dither(nrng));
  }

  // Ground-truth landmarks for the geometry drawn above.
  RenderedFace out;
  out.image = img;
  auto& pts = out.landmarks.points;
  for (int i = 0; i <= 16; ++i) {
    const double phi = (180.0 - 11.25 * i) * kPi / 180.0;
    const double dx = std::cos(phi), dy = std::sin(phi);
    const double t = 1.0 / std::hypot(dx / fa, dy / fb);
    pts[i] = {static_cast<float>(cx + t * dx), static_cast<float>(cy + t * dy)};
  }
  auto brow_truth = [&](double ex, int first) {
    const double hw = st.brow_hw * S;
    for (int i = 0; i < 5; ++i) {
      const double fx = ex - 0.75 * hw + 0.375 * hw * i;
      const double rel = (fx - ex) / hw;
      const double fy =
          brow_y + st.brow_arch * S * std::sqrt(std::max(0.0, 1 - rel * rel));
      pts[first + i] = {static_cast<float>(fx), static_cast<float>(fy)};
    }
  };
  brow_truth(lex, 17);
  brow_truth(rex, 22);
  const cv::Point2f mid_eyes(static_cast<float>((lex + rex) / 2),
                             static_cast<float>(eye_y));
  const cv::Point2f nose_base(static_cast<float>(nose_x),
                              static_cast<float>(nose_base_y));
  const cv::Point2f nose_tip(
      static_cast<float>(nose_x),
      static_cast<float>(nose_base_y - 0.12 * (mouth_y - eye_y)));
  for (int i = 0; i < 4; ++i)
    pts[27 + i] = mid_eyes + 0.25f * (i + 1) * (nose_tip - mid_eyes);
  const double nose_w = 0.22 * iod;
  for (int i = 0; i < 5; ++i)
    pts[31 + i] = {static_cast<float>(nose_base.x + nose_w * (i - 2) / 2.0),
                   static_cast<float>(nose_base.y + (i == 2 ? 1.5 : 0.0))};
  put_hex(pts, 36, {static_cast<float>(lex), static_cast<float>(eye_y)},
          static_cast<float>(0.95 * lw), static_cast<float>(0.8 * eh));
  put_hex(pts, 42, {static_cast<float>(rex), static_cast<float>(eye_y)},
          static_cast<float>(0.95 * rw), static_cast<float>(0.8 * eh));
  put_ell(pts, 48, {static_cast<float>(mouth_x), static_cast<float>(mouth_y)},
          static_cast<float>(mouth_hw), static_cast<float>(mouth_hh),
          {180, 150, 120, 90, 60, 30, 0, 330, 300, 270, 240, 210});
  put_ell(pts, 60, {static_cast<float>(mouth_x), static_cast<float>(mouth_y)},
          static_cast<float>(0.6 * mouth_hw), static_cast<float>(0.45 * mouth_hh),
          {180, 135, 90, 45, 0, 315, 270, 225});
  for (auto& p : pts) {
    p.x = std::clamp(p.x, 0.0f, static_cast<float>(img.cols - 1));
    p.y = std::clamp(p.y, 0.0f, static_cast<float>(img.rows - 1));
  }
  return out;
}

void render_corpus(const std::string& out_root, const RenderCorpusSpec& spec) {
  require(spec.subjects > 0 && spec.per_subject > 0,
          "render_corpus: empty spec");
  fs::create_directories(out_root);
  auto yaw_rng = make_rng(spec.seed, 21);
  for (int s = 0; s < spec.subjects; ++s) {
    char sub[16];
    std::snprintf(sub, sizeof(sub), "s%04d", s);
    fs::create_directories(fs::path(out_root) / sub);
    const std::uint64_t subject_seed = spec.seed * 1000003ULL + s;
    for (int i = 0; i < spec.per_subject; ++i) {
      RenderOptions opts;
      opts.canvas = spec.canvas;
      const bool nonfrontal = uni(yaw_rng, 0, 1) < spec.nonfrontal_fraction;
      const double mag = nonfrontal ? uni(yaw_rng, 0.30, 0.45)
                                    : uni(yaw_rng, 0.0, 0.05);
      opts.yaw = (uni(yaw_rng, 0, 1) < 0.5 ? -1 : 1) * mag;
      auto face = render_face(subject_seed, subject_seed * 131ULL + i, opts);
      char name[16];
      std::snprintf(name, sizeof(name), "i%03d.png", i);
      save_png((fs::path(out_root) / sub / name).string(), face.image);
    }
  }
}

cv::Mat fingerprint_pattern(FingerprintKind kind, cv::Size size) {
  static std::map<std::pair<int, std::pair<int, int>>, cv::Mat> cache;
  const auto key = std::make_pair(static_cast<int>(kind),
                                  std::make_pair(size.height, size.width));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  cv::Mat p(size, CV_64F);
  if (kind == FingerprintKind::PERIODIC_HF) {
    // Two gratings at radial frequency ~0.437 cycles/px.
    for (int y = 0; y < size.height; ++y)
      for (int x = 0; x < size.width; ++x)
        p.at<double>(y, x) =
            std::sin(2 * kPi * (0.4196 * x + 0.1203 * y)) +
            std::sin(2 * kPi * (0.1203 * x - 0.4196 * y) + 1.0);
    double ss = 0;
    for (int y = 0; y < size.height; ++y)
      for (int x = 0; x < size.width; ++x)
        ss += p.at<double>(y, x) * p.at<double>(y, x);
    p /= std::sqrt(ss / (static_cast<double>(size.height) * size.width));
  } else {
    // A fixed band-limited noise field; the seed is the signature.
    auto rng = make_rng(0xF17EF17EULL, 31);
    cv::Mat noise(size, CV_64F);
    for (int y = 0; y < size.height; ++y)
      for (int x = 0; x < size.width; ++x)
        noise.at<double>(y, x) = uni(rng, -1, 1);
    p = spectral::bandpass_unit_rms(noise, 0.375, 0.5);
  }
  cache[key] = p;
  return p;
}

cv::Mat stamp_fingerprint(const cv::Mat& base, FingerprintKind kind,
                          double amplitude) {
  require(base.type() == CV_8UC3, "stamp: expected CV_8UC3");
  const cv::Mat p = fingerprint_pattern(kind, base.size());
  cv::Mat out(base.size(), CV_8UC3);
  for (int y = 0; y < base.rows; ++y) {
    const cv::Vec3b* in = base.ptr<cv::Vec3b>(y);
    const double* pp = p.ptr<double>(y);
    cv::Vec3b* o = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < base.cols; ++x)
      for (int c = 0; c < 3; ++c)
        o[x][c] = cv::saturate_cast<uchar>(in[x][c] + amplitude * pp[x]);
  }
  return out;
}

namespace {

// Whole subjects in shuffled order until the quota is met; the last
// subject is trimmed to hit the count exactly.
std::vector<data::Entry> take_entries(
    const std::vector<std::string>& subjects,
    const std::map<std::string, std::vector<data::Entry>>& by_subject,
    std::size_t* cursor, int want) {
  std::vector<data::Entry> out;
  while (static_cast<int>(out.size()) < want) {
    require(*cursor < subjects.size(),
            "proxy corpus: base pool exhausted; need ", want,
            " more images but subjects ran out");
    const auto& es = by_subject.at(subjects[*cursor]);
    for (const auto& e : es) {
      if (static_cast<int>(out.size()) >= want) break;
      out.push_back(e);
    }
    ++(*cursor);
  }
  return out;
}

}  // namespace

std::pair<data::Manifest, std::vector<ProxyCorpus>> generate_proxy_corpora(
    const ProxyCorpusSpec& spec, const std::vector<FingerprintKind>& kinds,
    const data::Manifest& bases, const std::string& out_root) {
  require(spec.n_real > 0 && spec.n_fake > 0, "proxy corpus: empty spec");
  require(!kinds.empty(), "proxy corpus: no fingerprint kinds");
  require(!bases.empty(), "proxy corpus: empty base manifest");

  std::map<std::string, std::vector<data::Entry>> by_subject;
  for (const auto& e : bases.entries) by_subject[e.subject_id].push_back(e);
  std::vector<std::string> subjects;
  for (const auto& [s, _] : by_subject) subjects.push_back(s);
  auto rng = make_rng(spec.seed, 41);
  std::shuffle(subjects.begin(), subjects.end(), rng);

  std::size_t cursor = 0;
  data::Manifest real;
  real.root = bases.root;
  for (auto& e : take_entries(subjects, by_subject, &cursor, spec.n_real)) {
    e.label = Label::REAL;
    e.source = spec.real_source_tag;
    real.entries.push_back(std::move(e));
  }
  std::sort(real.entries.begin(), real.entries.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });

  std::vector<ProxyCorpus> out;
  for (const auto kind : kinds) {
    auto fake_bases = take_entries(subjects, by_subject, &cursor, spec.n_fake);
    const std::string kind_tag = to_string(kind);
    const fs::path kind_dir = fs::path(out_root) / kind_tag;
    fs::create_directories(kind_dir);

    ProxyCorpus pc;
    pc.real = real;
    pc.fake.root = out_root;
    double min_psnr = std::numeric_limits<double>::infinity();
    double sum_psnr = 0.0;
    int idx = 0;
    for (const auto& be : fake_bases) {
      cv::Mat base = load_image(bases.resolve(be));
      cv::Mat stamped = stamp_fingerprint(base, kind, spec.amplitude);
      const double p = metrics::psnr_db(base, stamped);
      min_psnr = std::min(min_psnr, p);
      sum_psnr += p;
      char name[32];
      std::snprintf(name, sizeof(name), "f%05d.png", idx++);
      save_png((kind_dir / name).string(), stamped);
      data::Entry fe;
      fe.path = (fs::path(kind_tag) / name).generic_string();
      fe.label = Label::FAKE;
      fe.subject_id.clear();  // synthetic images carry no identity
      fe.source = kind_tag;
      pc.fake.entries.push_back(std::move(fe));
    }
    pc.min_psnr_db = min_psnr;
    pc.mean_psnr_db = sum_psnr / fake_bases.size();
    require(pc.min_psnr_db >= 35.0,
            "proxy corpus: stamped PSNR ", pc.min_psnr_db,
            " dB below the 35 dB floor; lower the amplitude (",
            spec.amplitude, ")");
    out.push_back(std::move(pc));
  }
  return {real, std::move(out)};
}

ProxyCorpus generate_proxy_corpus(const ProxyCorpusSpec& spec,
                                  const data::Manifest& bases,
                                  const std::string& out_root) {
  auto [real, corpora] =
      generate_proxy_corpora(spec, {spec.kind}, bases, out_root);
  return std::move(corpora.front());
}

}  // namespace ganbench::proxy
