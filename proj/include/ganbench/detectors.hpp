#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <opencv2/core.hpp>
#include <string>
#include <vector>

#include "ganbench/datamodel.hpp"
#include "ganbench/nn/sequential.hpp"
#include "ganbench/preprocess.hpp"
#include "ganbench/transforms.hpp"

namespace ganbench::detectors {

enum class Kind { HOLISTIC_CNN, STEGANALYSIS, LOCAL_ARTIFACTS };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);

// ---- Co-occurrence features ------------------------------------------

// One 256x256 count matrix per colour channel; C[a][b] counts horizontal
// neighbour pairs (value a at (i,j), value b at (i,j+1)).
struct CooccurrenceFeature {
  std::array<std::vector<std::uint32_t>, 3> counts;

  CooccurrenceFeature() {
    for (auto& c : counts) c.assign(256 * 256, 0);
  }
  std::uint32_t at(int ch, int a, int b) const {
    return counts[ch][static_cast<std::size_t>(a) * 256 + b];
  }
  std::uint64_t channel_sum(int ch) const;
};

CooccurrenceFeature cooccurrence(const cv::Mat& img);

// log(1+count) scaling, (1,3,256,256), the steganalysis CNN input.
nn::Tensor<float> cooccurrence_tensor(const cv::Mat& img);

// ---- Eye colour features ---------------------------------------------

// Per eye: channel means (3), channel variances (3), highlight strength,
// pupil darkness, sharpness; then absolute left/right differences of all
// nine. 27 dimensions total.
inline constexpr int kEyeFeatureDim = 27;

std::vector<double> eye_color_features(const cv::Mat& img,
                                       const preprocess::LandmarkSet& lms);

// ---- Backbones ---------------------------------------------------------

// Separable-convolution feature extractors behind a name registry, so
// the holistic detector is not tied to one architecture. Checkpoints
// from pretrain_backbone provide the generic initialisation.
struct BackboneInfo {
  std::string name;
  int feature_dim = 0;
};

std::vector<std::string> backbone_names();
BackboneInfo backbone_info(const std::string& name);
void build_backbone(const std::string& name, nn::Sequential<float>* net,
                    Rng& rng);

// Pretrains on a procedural texture-classification task and writes a
// backbone checkpoint.
void pretrain_backbone(const std::string& name, const std::string& out_path,
                       int n_samples, int epochs, std::uint64_t seed,
                       bool verbose = false);

// ---- Detector training and scoring -------------------------------------

struct TrainConfig {
  int warmup_epochs = 3;     // head-only phase
  int finetune_epochs = 20;
  double learning_rate = 1e-3;
  double dropout = 0.5;
  int batch_size = 32;
  int micro_batch = 8;
  int knn_k = 5;
  std::uint64_t seed = 0;
  std::string backbone = "sepnet_small";
  std::string backbone_checkpoint;  // optional pretrained weights
  // Applied to development images before training (resolution grid).
  transforms::TransformSpec train_transform;
};

struct TrainInfo {
  std::vector<double> train_loss;  // per epoch (warmup + finetune)
  std::vector<double> val_accuracy;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;  // 1-based within the finetune phase
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual Kind kind() const = 0;
  // Probability-of-fake readout in [0,1]; higher = more likely fake.
  virtual double score(const cv::Mat& image) = 0;
  virtual void save(const std::string& path) const = 0;
};

std::unique_ptr<Detector> train_detector(Kind kind,
                                         const data::Manifest& real_train,
                                         const data::Manifest& fake_train,
                                         const data::Manifest& real_val,
                                         const data::Manifest& fake_val,
                                         const TrainConfig& cfg,
                                         TrainInfo* info = nullptr,
                                         bool verbose = false);

std::unique_ptr<Detector> load_detector(const std::string& path);

std::vector<double> score_manifest(Detector& det, const data::Manifest& m);

}  // namespace ganbench::detectors
