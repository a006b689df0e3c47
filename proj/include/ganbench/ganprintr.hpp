#pragma once

#include <cstdint>
#include <opencv2/core.hpp>
#include <string>
#include <vector>

#include "ganbench/datamodel.hpp"
#include "ganbench/nn/sequential.hpp"

namespace ganbench::ganprintr {

// Encoder: 3x3 conv + ReLU + 2x2 max-pool stages down to 28x28x128,
// then a conv bottleneck to 28x28xc. Decoder mirrors with nearest 2x
// upsampling; final conv + sigmoid back to 224x224x3.
struct AutoencoderSpec {
  int input_size = 224;
  int bottleneck_channels = 8;

  static const std::vector<int>& allowed_bottlenecks();  // 4..128
  void validate() const;
};

struct TrainConfig {
  int epochs = 100;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int micro_batch = 4;  // gradient accumulation granularity
  std::uint64_t seed = 0;
};

struct StageShapes {
  std::vector<nn::Shape> encoder;  // 112x112x32, 56x56x64, 28x28x128, 28x28xc
  std::vector<nn::Shape> decoder;  // 28x28x128, 56x56x64, 112x112x32, out
};

class Model {
 public:
  static Model build(const AutoencoderSpec& spec, std::uint64_t seed);

  nn::Tensor<float> forward(const nn::Tensor<float>& x, bool training = false);

  // 8-bit in, 8-bit out (clamped and rounded). Requires a trained model
  // and an input matching the spec size.
  cv::Mat apply(const cv::Mat& img);

  StageShapes stage_shapes();

  const AutoencoderSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  bool is_trained() const { return trained_; }
  void set_trained(bool t) { trained_ = t; }
  const std::vector<double>& history() const { return history_; }
  std::vector<double>& history() { return history_; }
  nn::Sequential<float>& net() { return net_; }

  void save(const std::string& path,
            const std::string& train_manifest_hash) const;
  static Model load(const std::string& path);

 private:
  AutoencoderSpec spec_;
  std::uint64_t seed_ = 0;
  bool trained_ = false;
  std::vector<double> history_;  // validation loss per trained epoch
  nn::Sequential<float> net_;
};

// Mean squared error with intensities in [0,1].
double reconstruction_loss(const nn::Tensor<float>& x,
                           const nn::Tensor<float>& x_rec);

struct TrainReport {
  double initial_val_loss = 0.0;
  double final_val_loss = 0.0;
};

// Trains in place. Both manifests must contain only REAL-labelled,
// preprocessed images (a FAKE entry is a bias bug and is fatal).
void train_autoencoder(Model& model, const data::Manifest& train,
                       const data::Manifest& val, const TrainConfig& cfg,
                       TrainReport* report = nullptr, bool verbose = false);

}  // namespace ganbench::ganprintr
