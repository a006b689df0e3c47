#include <iostream>
#include <opencv2/imgproc.hpp>

#include "ganbench/checkpoint.hpp"
#include "ganbench/detectors.hpp"
#include "ganbench/error.hpp"
#include "ganbench/image.hpp"
#include "ganbench/nn/adam.hpp"
#include "ganbench/nn/loss.hpp"

namespace ganbench::detectors {

namespace {

void add_sep_block(nn::Sequential<float>* net, int in_c, int out_c, Rng& rng) {
  net->add(std::make_unique<nn::DepthwiseConv2d<float>>(in_c, rng));
  net->add(std::make_unique<nn::ReLU<float>>());
  net->add(std::make_unique<nn::Conv2d<float>>(in_c, out_c, 1, 1, 0, rng));
  net->add(std::make_unique<nn::ReLU<float>>());
  net->add(std::make_unique<nn::MaxPool2<float>>());
}

}  // namespace

std::vector<std::string> backbone_names() {
  return {"sepnet_small", "sepnet_tiny"};
}

BackboneInfo backbone_info(const std::string& name) {
  if (name == "sepnet_small") return {name, 128};
  if (name == "sepnet_tiny") return {name, 48};
  fail("unknown backbone: ", name);
}

void build_backbone(const std::string& name, nn::Sequential<float>* net,
                    Rng& rng) {
  if (name == "sepnet_small") {
    net->add(std::make_unique<nn::Conv2d<float>>(3, 16, 3, 2, 1, rng));
    net->add(std::make_unique<nn::ReLU<float>>());
    add_sep_block(net, 16, 32, rng);
    add_sep_block(net, 32, 64, rng);
    add_sep_block(net, 64, 96, rng);
    add_sep_block(net, 96, 128, rng);
    net->add(std::make_unique<nn::GlobalAvgPool<float>>());
    return;
  }
  if (name == "sepnet_tiny") {
    net->add(std::make_unique<nn::Conv2d<float>>(3, 8, 3, 2, 1, rng));
    net->add(std::make_unique<nn::ReLU<float>>());
    add_sep_block(net, 8, 16, rng);
    add_sep_block(net, 16, 32, rng);
    add_sep_block(net, 32, 48, rng);
    net->add(std::make_unique<nn::GlobalAvgPool<float>>());
    return;
  }
  fail("unknown backbone: ", name);
}

namespace {

// Procedural texture classes for generic backbone pretraining. Nothing
// face- or fingerprint-specific here.
cv::Mat texture_sample(int cls, Rng& rng, int size) {
  std::uniform_real_distribution<double> u01(0, 1);
  auto color = [&] {
    return cv::Vec3b(static_cast<uchar>(40 + 180 * u01(rng)),
                     static_cast<uchar>(40 + 180 * u01(rng)),
                     static_cast<uchar>(40 + 180 * u01(rng)));
  };
  const cv::Vec3b c1 = color(), c2 = color();
  cv::Mat img(size, size, CV_8UC3, cv::Scalar(c1[0], c1[1], c1[2]));
  const double period = 4 + 12 * u01(rng);
  switch (cls) {
    case 0:
    case 1:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if (static_cast<int>((cls == 0 ? y : x) / period) % 2)
            img.at<cv::Vec3b>(y, x) = c2;
      break;
    case 2:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if ((static_cast<int>(y / period) + static_cast<int>(x / period)) % 2)
            img.at<cv::Vec3b>(y, x) = c2;
      break;
    case 3: {
      const int n = 5 + static_cast<int>(10 * u01(rng));
      for (int i = 0; i < n; ++i)
        cv::circle(img,
                   {static_cast<int>(size * u01(rng)),
                    static_cast<int>(size * u01(rng))},
                   3 + static_cast<int>(10 * u01(rng)),
                   cv::Scalar(c2[0], c2[1], c2[2]), cv::FILLED, cv::LINE_AA);
      break;
    }
    case 4: {
      const double ang = 2 * 3.14159265 * u01(rng);
      const double dx = std::cos(ang), dy = std::sin(ang);
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          const double t = std::clamp(
              0.5 + (dx * (x - size / 2.0) + dy * (y - size / 2.0)) / size, 0.0,
              1.0);
          for (int c = 0; c < 3; ++c)
            img.at<cv::Vec3b>(y, x)[c] =
                static_cast<uchar>(c1[c] * (1 - t) + c2[c] * t);
        }
      break;
    }
    case 5: {
      const double cx = size * (0.3 + 0.4 * u01(rng));
      const double cy = size * (0.3 + 0.4 * u01(rng));
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          if (static_cast<int>(std::hypot(x - cx, y - cy) / period) % 2)
            img.at<cv::Vec3b>(y, x) = c2;
      break;
    }
    case 6:
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          img.at<cv::Vec3b>(y, x) =
              cv::Vec3b(static_cast<uchar>(255 * u01(rng)),
                        static_cast<uchar>(255 * u01(rng)),
                        static_cast<uchar>(255 * u01(rng)));
      break;
    default: {
      cv::Mat grid(5, 5, CV_8UC3);
      for (int i = 0; i < 25; ++i) grid.at<cv::Vec3b>(i / 5, i % 5) = color();
      cv::resize(grid, img, img.size(), 0, 0, cv::INTER_LINEAR);
      break;
    }
  }
  // Mild sensor-style noise on everything.
  std::uniform_int_distribution<int> d(-4, 4);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int c = 0; c < 3; ++c)
        img.at<cv::Vec3b>(y, x)[c] =
            cv::saturate_cast<uchar>(img.at<cv::Vec3b>(y, x)[c] + d(rng));
  return img;
}

}  // namespace

void pretrain_backbone(const std::string& name, const std::string& out_path,
                       int n_samples, int epochs, std::uint64_t seed,
                       bool verbose) {
  constexpr int kClasses = 8;
  constexpr int kSize = 96;
  require(n_samples >= kClasses * 4, "pretrain: too few samples");
  require(epochs >= 1, "pretrain: epochs must be >= 1");

  const auto info = backbone_info(name);
  auto rng = make_rng(seed, 71);
  nn::Sequential<float> net;
  build_backbone(name, &net, rng);
  auto backbone_params = net.params();
  net.add(std::make_unique<nn::Dense<float>>(info.feature_dim, kClasses, rng));

  auto data_rng = make_rng(seed, 72);
  std::vector<cv::Mat> images(n_samples);
  std::vector<int> labels(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    labels[i] = i % kClasses;
    images[i] = texture_sample(labels[i], data_rng, kSize);
  }

  nn::Adam<float> opt(net.params(), 1e-3);
  auto shuffle_rng = make_rng(seed, 73);
  std::vector<std::size_t> order(images.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  constexpr int kBatch = 32, kMicro = 8;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_acc = 0;
    int correct = 0;
    std::size_t pos = 0;
    while (pos < order.size()) {
      const int bn = static_cast<int>(
          std::min<std::size_t>(kBatch, order.size() - pos));
      net.zero_grads();
      int mp = 0;
      while (mp < bn) {
        const int n = std::min(kMicro, bn - mp);
        nn::Tensor<float> x(n, 3, kSize, kSize);
        std::vector<int> yl(n);
        for (int i = 0; i < n; ++i) {
          const auto t = image_to_tensor(images[order[pos + mp + i]]);
          std::copy(t.v.begin(), t.v.end(),
                    x.v.begin() + static_cast<std::size_t>(i) * t.size());
          yl[i] = labels[order[pos + mp + i]];
        }
        auto logits = net.forward(x, true);
        nn::Tensor<float> dl;
        loss_acc += nn::softmax_xent(logits, yl, &dl) * n;
        for (int i = 0; i < n; ++i) {
          const auto p = nn::softmax_probs(logits, i);
          const int pred = static_cast<int>(
              std::max_element(p.begin(), p.end()) - p.begin());
          correct += pred == yl[i];
        }
        const float scale = static_cast<float>(n) / bn;
        for (auto& v : dl.v) v *= scale;
        net.backward(dl);
        mp += n;
      }
      opt.step();
      pos += bn;
    }
    if (verbose)
      std::cerr << "pretrain epoch " << epoch << ": loss "
                << loss_acc / images.size() << " acc "
                << static_cast<double>(correct) / images.size() << "\n";
  }

  Checkpoint ckpt;
  ckpt.header = {{"kind", "backbone"},
                 {"name", name},
                 {"feature_dim", info.feature_dim},
                 {"seed", seed},
                 {"samples", n_samples},
                 {"epochs", epochs}};
  for (std::size_t i = 0; i < backbone_params.size(); ++i) {
    char tn[16];
    std::snprintf(tn, sizeof(tn), "p%03zu", i);
    ckpt.tensors.emplace_back(tn, backbone_params[i]->value);
  }
  save_checkpoint(out_path, ckpt);
}

}  // namespace ganbench::detectors
