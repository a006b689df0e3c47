#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "ganbench/datamodel.hpp"
#include "ganbench/preprocess.hpp"

namespace ganbench::proxy {

enum class FingerprintKind { PERIODIC_HF, NOISE_SIGNATURE };

std::string to_string(FingerprintKind k);
FingerprintKind fingerprint_from_string(const std::string& s);

// ---- Procedural portrait renderer -----------------------------------
//
// Identity-level appearance (skin, hair, iris colour, geometry) comes
// from the subject seed; per-image variation (pose, lighting,
// expression) from the image seed. The renderer reports the geometry it
// drew as iBUG-68 ground truth so detector tests have an annotation.

struct RenderOptions {
  int canvas = 256;
  bool bald = false;        // no hair cap; used by landmark fixtures
  double yaw = 0.0;         // 0 frontal; |yaw| ~0.35 clearly non-frontal
};

struct RenderedFace {
  cv::Mat image;  // CV_8UC3
  preprocess::LandmarkSet landmarks;
};

RenderedFace render_face(std::uint64_t subject_seed,
                         std::uint64_t image_seed,
                         const RenderOptions& opts = {});

struct RenderCorpusSpec {
  int subjects = 10;
  int per_subject = 10;
  int canvas = 256;
  double nonfrontal_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Writes <out_root>/s<k>/i<j>.png; one directory per subject.
void render_corpus(const std::string& out_root, const RenderCorpusSpec& spec);

// ---- Fingerprint stamping --------------------------------------------

// Unit-RMS pattern confined to the radial band [0.375, 0.5] cycles/px;
// fixed per kind (it plays the role of a generator's fingerprint).
cv::Mat fingerprint_pattern(FingerprintKind kind, cv::Size size);

// base + amplitude * pattern on every channel, clipped and rounded.
cv::Mat stamp_fingerprint(const cv::Mat& base, FingerprintKind kind,
                          double amplitude);

struct ProxyCorpusSpec {
  int n_real = 0;
  int n_fake = 0;
  FingerprintKind kind = FingerprintKind::PERIODIC_HF;
  double amplitude = 2.5;  // intensity units; PSNR(clean, stamped) >= 35 dB
  std::uint64_t seed = 0;
  std::string real_source_tag = "PROXYR";
};

struct ProxyCorpus {
  data::Manifest real;
  data::Manifest fake;
  double min_psnr_db = 0.0;
  double mean_psnr_db = 0.0;
};

// Partitions the (preprocessed, subject-grouped) base pool into a real
// side and a disjoint fake side, stamps the fake side, writes the
// stamped PNGs under out_root. Fakes lose their subject identity.
ProxyCorpus generate_proxy_corpus(const ProxyCorpusSpec& spec,
                                  const data::Manifest& bases,
                                  const std::string& out_root);

// Multi-kind variant: one real side, one stamped set per kind, all base
// sets pairwise disjoint.
std::pair<data::Manifest, std::vector<ProxyCorpus>> generate_proxy_corpora(
    const ProxyCorpusSpec& spec, const std::vector<FingerprintKind>& kinds,
    const data::Manifest& bases, const std::string& out_root);

}  // namespace ganbench::proxy
