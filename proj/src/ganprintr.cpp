#include "ganbench/ganprintr.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "ganbench/checkpoint.hpp"
#include "ganbench/error.hpp"
#include "ganbench/hash.hpp"
#include "ganbench/nn/adam.hpp"
#include "ganbench/nn/loss.hpp"
#include "ganbench/rng.hpp"

namespace ganbench::ganprintr {

const std::vector<int>& AutoencoderSpec::allowed_bottlenecks() {
  static const std::vector<int> k{4, 8, 16, 32, 64, 128};
  return k;
}

void AutoencoderSpec::validate() const {
  require(input_size == 224, "autoencoder input size must be 224");
  const auto& allowed = allowed_bottlenecks();
  require(std::find(allowed.begin(), allowed.end(), bottleneck_channels) !=
              allowed.end(),
          "bottleneck channels ", bottleneck_channels,
          " not in the allowed sweep set {4,8,16,32,64,128}");
}

namespace {
// Layer indices whose outputs are the named activation maps.
constexpr int kEncoderTaps[4] = {2, 5, 8, 10};
constexpr int kDecoderTaps[4] = {12, 15, 18, 21};
}  // namespace

Model Model::build(const AutoencoderSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model m;
  m.spec_ = spec;
  m.seed_ = seed;
  auto rng = make_rng(seed, 61);
  auto& net = m.net_;
  using nn::Conv2d;
  const int c = spec.bottleneck_channels;

  net.add(Conv2d<float>::same(3, 32, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());
  net.add(std::make_unique<nn::MaxPool2<float>>());  // 112x112x32
  net.add(Conv2d<float>::same(32, 64, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());
  net.add(std::make_unique<nn::MaxPool2<float>>());  // 56x56x64
  net.add(Conv2d<float>::same(64, 128, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());
  net.add(std::make_unique<nn::MaxPool2<float>>());  // 28x28x128
  net.add(Conv2d<float>::same(128, c, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());      // 28x28xc bottleneck

  net.add(Conv2d<float>::same(c, 128, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());      // 28x28x128
  net.add(std::make_unique<nn::Upsample2<float>>());
  net.add(Conv2d<float>::same(128, 64, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());      // 56x56x64
  net.add(std::make_unique<nn::Upsample2<float>>());
  net.add(Conv2d<float>::same(64, 32, 3, rng));
  net.add(std::make_unique<nn::ReLU<float>>());      // 112x112x32
  net.add(std::make_unique<nn::Upsample2<float>>());
  net.add(Conv2d<float>::same(32, 3, 3, rng));
  net.add(std::make_unique<nn::Sigmoid<float>>());   // 224x224x3
  return m;
}

nn::Tensor<float> Model::forward(const nn::Tensor<float>& x, bool training) {
  require(x.c == 3 && x.h == spec_.input_size && x.w == spec_.input_size,
          "autoencoder: expected ", spec_.input_size, "x", spec_.input_size,
          "x3 input, got ", x.h, "x", x.w, "x", x.c);
  return net_.forward(x, training);
}

cv::Mat Model::apply(const cv::Mat& img) {
  require(trained_, "autoencoder: model is untrained");
  require(img.type() == CV_8UC3 && img.rows == spec_.input_size &&
              img.cols == spec_.input_size,
          "autoencoder: expected ", spec_.input_size, "x", spec_.input_size,
          " 8-bit 3-channel input");
  const auto y = forward(image_to_tensor(img), false);
  return tensor_to_image(y, 0);
}

StageShapes Model::stage_shapes() {
  nn::Tensor<float> probe(1, 3, spec_.input_size, spec_.input_size);
  net_.forward(probe, false);
  const auto& shapes = net_.last_shapes();
  StageShapes out;
  for (const int i : kEncoderTaps) out.encoder.push_back(shapes[i]);
  for (const int i : kDecoderTaps) out.decoder.push_back(shapes[i]);
  return out;
}

double reconstruction_loss(const nn::Tensor<float>& x,
                           const nn::Tensor<float>& x_rec) {
  require(x.same_shape(x_rec), "reconstruction_loss: shape mismatch");
  return nn::mse(x_rec, x);
}

void Model::save(const std::string& path,
                 const std::string& train_manifest_hash) const {
  Checkpoint ckpt;
  ckpt.header = {{"kind", "ganprintr"},
                 {"input_size", spec_.input_size},
                 {"bottleneck_channels", spec_.bottleneck_channels},
                 {"seed", seed_},
                 {"epochs_trained", history_.size()},
                 {"history", history_},
                 {"trained", trained_},
                 {"train_manifest_hash", train_manifest_hash}};
  auto params = const_cast<Model*>(this)->net_.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "p%03zu", i);
    ckpt.tensors.emplace_back(name, params[i]->value);
  }
  save_checkpoint(path, ckpt);
}

Model Model::load(const std::string& path) {
  Checkpoint ckpt = load_checkpoint(path);
  require(ckpt.header.value("kind", "") == "ganprintr",
          "not a ganprintr checkpoint: ", path);
  AutoencoderSpec spec;
  spec.input_size = ckpt.header.at("input_size").get<int>();
  spec.bottleneck_channels = ckpt.header.at("bottleneck_channels").get<int>();
  Model m = build(spec, ckpt.header.at("seed").get<std::uint64_t>());
  auto params = m.net_.params();
  require(params.size() == ckpt.tensors.size(),
          "checkpoint parameter count mismatch: ", path);
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(params[i]->value.same_shape(ckpt.tensors[i].second),
            "checkpoint tensor shape mismatch at index ", i);
    params[i]->value = ckpt.tensors[i].second;
  }
  m.trained_ = ckpt.header.value("trained", false);
  m.history_ = ckpt.header.value("history", std::vector<double>{});
  return m;
}

namespace {

std::vector<cv::Mat> load_images(const data::Manifest& m, int expect_size) {
  std::vector<cv::Mat> out;
  out.reserve(m.size());
  for (const auto& e : m.entries) {
    require(e.label == Label::REAL,
            "autoencoder training saw a FAKE-labelled image (bias guard): ",
            e.path);
    cv::Mat img = load_image(m.resolve(e));
    require(img.rows == expect_size && img.cols == expect_size,
            "autoencoder training image is not ", expect_size, "x",
            expect_size, " (run prepare first): ", e.path);
    out.push_back(std::move(img));
  }
  return out;
}

double validation_loss(Model& model, const std::vector<cv::Mat>& images,
                       int micro_batch) {
  double acc = 0.0;
  std::size_t done = 0;
  while (done < images.size()) {
    const int n = static_cast<int>(
        std::min<std::size_t>(micro_batch, images.size() - done));
    nn::Tensor<float> x(n, 3, images[0].rows, images[0].cols);
    for (int i = 0; i < n; ++i) {
      const auto t = image_to_tensor(images[done + i]);
      std::copy(t.v.begin(), t.v.end(),
                x.v.begin() + static_cast<std::size_t>(i) * t.size());
    }
    const auto y = model.forward(x, false);
    acc += nn::mse(y, x) * n;
    done += n;
  }
  return acc / static_cast<double>(images.size());
}

}  // namespace

void train_autoencoder(Model& model, const data::Manifest& train,
                       const data::Manifest& val, const TrainConfig& cfg,
                       TrainReport* report, bool verbose) {
  require(cfg.epochs >= 1, "train_autoencoder: epochs must be >= 1");
  require(cfg.learning_rate > 0, "train_autoencoder: learning rate must be > 0");
  require(cfg.batch_size >= 1 && cfg.micro_batch >= 1,
          "train_autoencoder: bad batch sizes");
  require(!train.empty() && !val.empty(),
          "train_autoencoder: empty manifest");

  const int side = model.spec().input_size;
  const auto train_imgs = load_images(train, side);
  const auto val_imgs = load_images(val, side);

  nn::Adam<float> opt(model.net().params(), cfg.learning_rate);
  auto shuffle_rng = make_rng(cfg.seed, 62);

  const double initial_val = validation_loss(model, val_imgs, cfg.micro_batch);
  if (verbose)
    std::cerr << "epoch 0: val_loss " << initial_val << "\n";

  std::vector<std::size_t> order(train_imgs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    std::size_t pos = 0;
    while (pos < order.size()) {
      const int batch_n = static_cast<int>(
          std::min<std::size_t>(cfg.batch_size, order.size() - pos));
      model.net().zero_grads();
      int micro_pos = 0;
      while (micro_pos < batch_n) {
        const int n = std::min(cfg.micro_batch, batch_n - micro_pos);
        nn::Tensor<float> x(n, 3, side, side);
        for (int i = 0; i < n; ++i) {
          const auto t = image_to_tensor(train_imgs[order[pos + micro_pos + i]]);
          std::copy(t.v.begin(), t.v.end(),
                    x.v.begin() + static_cast<std::size_t>(i) * t.size());
        }
        const auto y = model.forward(x, true);
        auto g = nn::mse_grad(y, x);
        // Accumulated micro-batch gradients average to the batch gradient.
        const float scale = static_cast<float>(n) / batch_n;
        for (auto& v : g.v) v *= scale;
        model.net().backward(g);
        micro_pos += n;
      }
      opt.step();
      pos += batch_n;
    }
    const double vl = validation_loss(model, val_imgs, cfg.micro_batch);
    model.history().push_back(vl);
    if (verbose)
      std::cerr << "epoch " << epoch << ": val_loss " << vl << "\n";
  }

  const double final_val = model.history().back();
  require(final_val < initial_val,
          "train_autoencoder: validation loss did not improve (",
          initial_val, " -> ", final_val, ")");
  model.set_trained(true);
  if (report) {
    report->initial_val_loss = initial_val;
    report->final_val_loss = final_val;
  }
}

}  // namespace ganbench::ganprintr
