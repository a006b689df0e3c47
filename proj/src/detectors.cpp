#include "ganbench/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <opencv2/imgproc.hpp>

#include "ganbench/checkpoint.hpp"
#include "ganbench/error.hpp"
#include "ganbench/hash.hpp"
#include "ganbench/nn/adam.hpp"
#include "ganbench/nn/loss.hpp"

namespace ganbench::detectors {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::HOLISTIC_CNN: return "holistic";
    case Kind::STEGANALYSIS: return "steg";
    case Kind::LOCAL_ARTIFACTS: return "artifacts";
  }
  fail("bad detector kind");
}

Kind kind_from_string(const std::string& s) {
  if (s == "holistic") return Kind::HOLISTIC_CNN;
  if (s == "steg") return Kind::STEGANALYSIS;
  if (s == "artifacts") return Kind::LOCAL_ARTIFACTS;
  fail("unknown detector kind: ", s);
}

std::uint64_t CooccurrenceFeature::channel_sum(int ch) const {
  std::uint64_t s = 0;
  for (const auto v : counts[ch]) s += v;
  return s;
}

CooccurrenceFeature cooccurrence(const cv::Mat& img) {
  require(img.type() == CV_8UC3, "cooccurrence: expected CV_8UC3");
  CooccurrenceFeature f;
  for (int y = 0; y < img.rows; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x + 1 < img.cols; ++x)
      for (int c = 0; c < 3; ++c)
        ++f.counts[c][static_cast<std::size_t>(row[x][c]) * 256 +
                      row[x + 1][c]];
  }
  return f;
}

nn::Tensor<float> cooccurrence_tensor(const cv::Mat& img) {
  const auto f = cooccurrence(img);
  nn::Tensor<float> t(1, 3, 256, 256);
  for (int c = 0; c < 3; ++c) {
    float* dst = &t.at(0, c, 0, 0);
    const auto& src = f.counts[c];
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i]) dst[i] = std::log1p(static_cast<float>(src[i]));
  }
  return t;
}

namespace {

double luma(const cv::Vec3b& bgr) {
  return 0.114 * bgr[0] + 0.587 * bgr[1] + 0.299 * bgr[2];
}

struct EyeStats {
  double mean[3] = {0, 0, 0};
  double var[3] = {0, 0, 0};
  double highlight = 0;
  double pupil_dark = 0;
  double sharpness = 0;
};

EyeStats eye_stats(const cv::Mat& img, const cv::Point2f* poly) {
  cv::Mat mask(img.size(), CV_8UC1, cv::Scalar(0));
  std::vector<cv::Point> ipoly(6);
  for (int i = 0; i < 6; ++i)
    ipoly[i] = {static_cast<int>(std::lround(poly[i].x)),
                static_cast<int>(std::lround(poly[i].y))};
  cv::fillConvexPoly(mask, ipoly, 255);
  const int area = cv::countNonZero(mask);
  require(area > 0, "eye_color_features: degenerate eye polygon");

  EyeStats s;
  double lsum = 0, lmin = 255, lmax = 0;
  double csum[3] = {0, 0, 0}, c2sum[3] = {0, 0, 0};
  for (int y = 0; y < img.rows; ++y) {
    const uchar* m = mask.ptr<uchar>(y);
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x) {
      if (!m[x]) continue;
      for (int c = 0; c < 3; ++c) {
        const double v = row[x][c] / 255.0;
        csum[c] += v;
        c2sum[c] += v * v;
      }
      const double l = luma(row[x]);
      lsum += l;
      lmin = std::min(lmin, l);
      lmax = std::max(lmax, l);
    }
  }
  for (int c = 0; c < 3; ++c) {
    s.mean[c] = csum[c] / area;
    s.var[c] = std::max(0.0, c2sum[c] / area - s.mean[c] * s.mean[c]);
  }
  const double lmean = lsum / area;
  s.highlight = (lmax - lmean) / 255.0;
  s.pupil_dark = (lmean - lmin) / 255.0;

  // Sharpness: mean |4-neighbour Laplacian| of luma over interior pixels.
  double lap_sum = 0;
  int lap_n = 0;
  for (int y = 1; y + 1 < img.rows; ++y) {
    const uchar* m = mask.ptr<uchar>(y);
    for (int x = 1; x + 1 < img.cols; ++x) {
      if (!m[x] || !mask.at<uchar>(y - 1, x) || !mask.at<uchar>(y + 1, x) ||
          !m[x - 1] || !m[x + 1])
        continue;
      const double l = 4 * luma(img.at<cv::Vec3b>(y, x)) -
                       luma(img.at<cv::Vec3b>(y - 1, x)) -
                       luma(img.at<cv::Vec3b>(y + 1, x)) -
                       luma(img.at<cv::Vec3b>(y, x - 1)) -
                       luma(img.at<cv::Vec3b>(y, x + 1));
      lap_sum += std::abs(l);
      ++lap_n;
    }
  }
  s.sharpness = lap_n ? lap_sum / lap_n / 255.0 : 0.0;
  return s;
}

void push_stats(std::vector<double>* out, const EyeStats& s) {
  for (int c = 0; c < 3; ++c) out->push_back(s.mean[c]);
  for (int c = 0; c < 3; ++c) out->push_back(s.var[c]);
  out->push_back(s.highlight);
  out->push_back(s.pupil_dark);
  out->push_back(s.sharpness);
}

}  // namespace

std::vector<double> eye_color_features(const cv::Mat& img,
                                       const preprocess::LandmarkSet& lms) {
  require(img.type() == CV_8UC3, "eye_color_features: expected CV_8UC3");
  const EyeStats left = eye_stats(img, &lms.points[36]);
  const EyeStats right = eye_stats(img, &lms.points[42]);
  std::vector<double> f;
  f.reserve(kEyeFeatureDim);
  push_stats(&f, left);
  push_stats(&f, right);
  for (int i = 0; i < 9; ++i) f.push_back(std::abs(f[i] - f[9 + i]));
  return f;
}

// ---- CNN detectors -----------------------------------------------------

namespace {

nn::Tensor<float> cnn_input(Kind kind, const cv::Mat& img) {
  return kind == Kind::STEGANALYSIS ? cooccurrence_tensor(img)
                                    : image_to_tensor(img);
}

class CnnDetector final : public Detector {
 public:
  CnnDetector(Kind kind, const TrainConfig& cfg) : kind_(kind), cfg_(cfg) {
    auto rng = make_rng(cfg.seed, 81);
    if (kind == Kind::STEGANALYSIS) {
      feature_dim_ = 32;
      net_.add(std::make_unique<nn::Conv2d<float>>(3, 8, 3, 2, 1, rng));
      net_.add(std::make_unique<nn::ReLU<float>>());
      net_.add(std::make_unique<nn::Conv2d<float>>(8, 16, 3, 2, 1, rng));
      net_.add(std::make_unique<nn::ReLU<float>>());
      net_.add(std::make_unique<nn::Conv2d<float>>(16, 32, 3, 2, 1, rng));
      net_.add(std::make_unique<nn::ReLU<float>>());
      net_.add(std::make_unique<nn::GlobalAvgPool<float>>());
    } else {
      feature_dim_ = backbone_info(cfg.backbone).feature_dim;
      build_backbone(cfg.backbone, &net_, rng);
    }
    backbone_params_ = net_.params();
    net_.add(std::make_unique<nn::Dropout<float>>(cfg.dropout, rng));
    net_.add(std::make_unique<nn::Dense<float>>(feature_dim_, 2, rng));
    head_params_ = net_.layer(net_.num_layers() - 1)->params();
  }

  Kind kind() const override { return kind_; }

  double score(const cv::Mat& image) override {
    require(trained_, "detector is untrained");
    auto logits = net_.forward(cnn_input(kind_, image), false);
    return nn::softmax_probs(logits, 0)[1];
  }

  void save(const std::string& path) const override {
    Checkpoint ckpt;
    ckpt.header = {{"kind", "detector"},
                   {"detector", detectors::to_string(kind_)},
                   {"backbone", kind_ == Kind::STEGANALYSIS ? "stegnet"
                                                            : cfg_.backbone},
                   {"dropout", cfg_.dropout},
                   {"seed", cfg_.seed},
                   {"best_epoch", best_epoch_},
                   {"best_val_accuracy", best_val_acc_},
                   {"train_manifest_hash", train_manifest_hash_}};
    auto params = const_cast<CnnDetector*>(this)->net_.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      char tn[16];
      std::snprintf(tn, sizeof(tn), "p%03zu", i);
      ckpt.tensors.emplace_back(tn, params[i]->value);
    }
    save_checkpoint(path, ckpt);
  }

  void load_params(const Checkpoint& ckpt) {
    auto params = net_.params();
    require(params.size() == ckpt.tensors.size(),
            "detector checkpoint parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
      require(params[i]->value.same_shape(ckpt.tensors[i].second),
              "detector checkpoint tensor shape mismatch at ", i);
      params[i]->value = ckpt.tensors[i].second;
    }
    trained_ = true;
  }

  void load_backbone_checkpoint(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    require(ckpt.header.value("kind", "") == "backbone",
            "not a backbone checkpoint: ", path);
    require(ckpt.header.value("name", "") == cfg_.backbone,
            "backbone checkpoint is for '", ckpt.header.value("name", ""),
            "', detector wants '", cfg_.backbone, "'");
    require(backbone_params_.size() == ckpt.tensors.size(),
            "backbone checkpoint parameter count mismatch");
    for (std::size_t i = 0; i < backbone_params_.size(); ++i) {
      require(backbone_params_[i]->value.same_shape(ckpt.tensors[i].second),
              "backbone checkpoint tensor shape mismatch at ", i);
      backbone_params_[i]->value = ckpt.tensors[i].second;
    }
  }

  nn::Sequential<float>& net() { return net_; }
  std::vector<nn::Param<float>*> head_params() { return head_params_; }
  void set_trained(bool t) { trained_ = t; }
  void set_best(int epoch, double acc) {
    best_epoch_ = epoch;
    best_val_acc_ = acc;
  }
  void set_train_manifest_hash(std::string h) {
    train_manifest_hash_ = std::move(h);
  }
  const TrainConfig& cfg() const { return cfg_; }

 private:
  Kind kind_;
  TrainConfig cfg_;
  int feature_dim_ = 0;
  nn::Sequential<float> net_;
  std::vector<nn::Param<float>*> backbone_params_, head_params_;
  bool trained_ = false;
  int best_epoch_ = 0;
  double best_val_acc_ = 0.0;
  std::string train_manifest_hash_;
};

struct LabelledImages {
  std::vector<cv::Mat> images;
  std::vector<int> labels;  // 0 real, 1 fake
};

LabelledImages load_labelled(const data::Manifest& real,
                             const data::Manifest& fake,
                             const transforms::TransformSpec& tf) {
  LabelledImages out;
  out.images.reserve(real.size() + fake.size());
  auto add = [&](const data::Manifest& m, int label) {
    for (const auto& e : m.entries) {
      cv::Mat img = load_image(m.resolve(e));
      if (tf.kind != transforms::Kind::IDENTITY)
        img = transforms::apply(tf, img);
      out.images.push_back(std::move(img));
      out.labels.push_back(label);
    }
  };
  add(real, 0);
  add(fake, 1);
  return out;
}

std::vector<double> batched_scores(CnnDetector& det, Kind kind,
                                   const std::vector<cv::Mat>& images,
                                   int micro_batch) {
  std::vector<double> scores;
  scores.reserve(images.size());
  std::size_t pos = 0;
  while (pos < images.size()) {
    const int n = static_cast<int>(
        std::min<std::size_t>(micro_batch, images.size() - pos));
    const auto probe = cnn_input(kind, images[pos]);
    nn::Tensor<float> x(n, probe.c, probe.h, probe.w);
    std::copy(probe.v.begin(), probe.v.end(), x.v.begin());
    for (int i = 1; i < n; ++i) {
      const auto t = cnn_input(kind, images[pos + i]);
      std::copy(t.v.begin(), t.v.end(),
                x.v.begin() + static_cast<std::size_t>(i) * t.size());
    }
    auto logits = det.net().forward(x, false);
    for (int i = 0; i < n; ++i) scores.push_back(nn::softmax_probs(logits, i)[1]);
    pos += n;
  }
  return scores;
}

double accuracy_at_half(const std::vector<double>& scores,
                        const std::vector<int>& labels) {
  int correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    correct += (scores[i] >= 0.5 ? 1 : 0) == labels[i];
  return static_cast<double>(correct) / scores.size();
}

void run_epochs(CnnDetector& det, Kind kind, const LabelledImages& train,
                const TrainConfig& cfg, nn::Adam<float>& opt, int epochs,
                Rng& shuffle_rng, std::vector<double>* loss_log) {
  std::vector<std::size_t> order(train.images.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_acc = 0;
    std::size_t pos = 0;
    while (pos < order.size()) {
      const int bn = static_cast<int>(
          std::min<std::size_t>(cfg.batch_size, order.size() - pos));
      det.net().zero_grads();
      int mp = 0;
      while (mp < bn) {
        const int n = std::min(cfg.micro_batch, bn - mp);
        const auto probe = cnn_input(kind, train.images[order[pos + mp]]);
        nn::Tensor<float> x(n, probe.c, probe.h, probe.w);
        std::vector<int> yl(n);
        std::copy(probe.v.begin(), probe.v.end(), x.v.begin());
        yl[0] = train.labels[order[pos + mp]];
        for (int i = 1; i < n; ++i) {
          const auto t = cnn_input(kind, train.images[order[pos + mp + i]]);
          std::copy(t.v.begin(), t.v.end(),
                    x.v.begin() + static_cast<std::size_t>(i) * t.size());
          yl[i] = train.labels[order[pos + mp + i]];
        }
        auto logits = det.net().forward(x, true);
        nn::Tensor<float> dl;
        loss_acc += nn::softmax_xent(logits, yl, &dl) * n;
        const float scale = static_cast<float>(n) / bn;
        for (auto& v : dl.v) v *= scale;
        det.net().backward(dl);
        mp += n;
      }
      opt.step();
      pos += bn;
    }
    if (loss_log) loss_log->push_back(loss_acc / train.images.size());
  }
}

std::unique_ptr<Detector> train_cnn(Kind kind, const data::Manifest& real_train,
                                    const data::Manifest& fake_train,
                                    const data::Manifest& real_val,
                                    const data::Manifest& fake_val,
                                    const TrainConfig& cfg, TrainInfo* info,
                                    bool verbose) {
  auto det = std::make_unique<CnnDetector>(kind, cfg);
  if (kind == Kind::HOLISTIC_CNN) {
    if (!cfg.backbone_checkpoint.empty())
      det->load_backbone_checkpoint(cfg.backbone_checkpoint);
    else
      std::cerr << "note: holistic backbone starts from random weights; "
                   "pass a pretrained backbone checkpoint for the standard "
                   "recipe\n";
  }

  const auto train = load_labelled(real_train, fake_train, cfg.train_transform);
  const auto val = load_labelled(real_val, fake_val, cfg.train_transform);

  TrainInfo local;
  TrainInfo& ti = info ? *info : local;
  auto shuffle_rng = make_rng(cfg.seed, 82);

  // Head-only warmup, then full fine-tune with best-epoch selection.
  {
    nn::Adam<float> head_opt(det->head_params(), cfg.learning_rate);
    run_epochs(*det, kind, train, cfg, head_opt, cfg.warmup_epochs,
               shuffle_rng, &ti.train_loss);
  }
  nn::Adam<float> opt(det->net().params(), cfg.learning_rate);
  std::vector<nn::Tensor<float>> best_params;
  double best_acc = -1.0;
  int best_epoch = 0;
  for (int epoch = 1; epoch <= cfg.finetune_epochs; ++epoch) {
    run_epochs(*det, kind, train, cfg, opt, 1, shuffle_rng, &ti.train_loss);
    const auto val_scores = batched_scores(*det, kind, val.images,
                                           cfg.micro_batch);
    const double acc = accuracy_at_half(val_scores, val.labels);
    ti.val_accuracy.push_back(acc);
    if (verbose)
      std::cerr << to_string(kind) << " epoch " << epoch << ": val_acc "
                << acc << "\n";
    if (acc > best_acc) {
      best_acc = acc;
      best_epoch = epoch;
      best_params.clear();
      for (auto* p : det->net().params()) best_params.push_back(p->value);
    }
  }
  auto params = det->net().params();
  for (std::size_t i = 0; i < params.size(); ++i)
    params[i]->value = best_params[i];
  det->set_best(best_epoch, best_acc);
  det->set_trained(true);
  ti.best_val_accuracy = best_acc;
  ti.best_epoch = best_epoch;

  // Orientation sanity on the validation set.
  const auto val_scores = batched_scores(*det, kind, val.images,
                                         cfg.micro_batch);
  double mean_fake = 0, mean_real = 0;
  int n_fake = 0, n_real = 0;
  for (std::size_t i = 0; i < val_scores.size(); ++i) {
    if (val.labels[i]) {
      mean_fake += val_scores[i];
      ++n_fake;
    } else {
      mean_real += val_scores[i];
      ++n_real;
    }
  }
  require(mean_fake / n_fake > mean_real / n_real,
          "detector training failed: mean fake score does not exceed mean "
          "real score on validation data");
  return det;
}

// ---- k-NN on eye colour features ---------------------------------------

class KnnDetector final : public Detector {
 public:
  explicit KnnDetector(const TrainConfig& cfg)
      : k_(cfg.knn_k), seed_(cfg.seed),
        backend_(preprocess::make_landmark_backend()) {}

  Kind kind() const override { return Kind::LOCAL_ARTIFACTS; }

  double score(const cv::Mat& image) override {
    require(trained_, "detector is untrained");
    auto lms = backend_->detect(image);
    if (!lms) return 0.5;  // no face evidence either way
    return score_features(eye_color_features(image, *lms));
  }

  double score_features(const std::vector<double>& raw) const {
    require(trained_, "detector is untrained");
    std::vector<double> f(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      f[i] = (raw[i] - mean_[i]) / stddev_[i];
    std::vector<std::pair<double, std::size_t>> dist(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
      double d2 = 0;
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double d = f[j] - features_[i][j];
        d2 += d * d;
      }
      dist[i] = {std::sqrt(d2), i};
    }
    std::sort(dist.begin(), dist.end());
    const int k = std::min<int>(k_, static_cast<int>(dist.size()));
    // Neighbours tied at the k-boundary share their fake fraction
    // proportionally over the remaining slots.
    int inside = 0;
    double fake_inside = 0;
    const double kth = dist[k - 1].first;
    double fake_tied = 0;
    int n_tied = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i].first < kth) {
        ++inside;
        fake_inside += labels_[dist[i].second];
      } else if (dist[i].first == kth) {
        ++n_tied;
        fake_tied += labels_[dist[i].second];
      }
    }
    const int slots = k - inside;
    return (fake_inside + fake_tied * slots / n_tied) / k;
  }

  void fit(std::vector<std::vector<double>> feats, std::vector<int> labels) {
    require(!feats.empty(), "knn: no training features");
    const std::size_t dim = feats[0].size();
    mean_.assign(dim, 0.0);
    stddev_.assign(dim, 0.0);
    for (const auto& f : feats)
      for (std::size_t j = 0; j < dim; ++j) mean_[j] += f[j];
    for (auto& m : mean_) m /= static_cast<double>(feats.size());
    for (const auto& f : feats)
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = f[j] - mean_[j];
        stddev_[j] += d * d;
      }
    for (auto& s : stddev_) {
      s = std::sqrt(s / static_cast<double>(feats.size()));
      if (s < 1e-12) s = 1.0;
    }
    features_ = std::move(feats);
    for (auto& f : features_)
      for (std::size_t j = 0; j < dim; ++j) f[j] = (f[j] - mean_[j]) / stddev_[j];
    labels_ = std::move(labels);
    trained_ = true;
  }

  void save(const std::string& path) const override {
    Checkpoint ckpt;
    ckpt.header = {{"kind", "detector"},
                   {"detector", "artifacts"},
                   {"k", k_},
                   {"seed", seed_},
                   {"feature_dim", static_cast<int>(mean_.size())},
                   {"train_manifest_hash", train_manifest_hash_}};
    const int n = static_cast<int>(features_.size());
    const int dim = static_cast<int>(mean_.size());
    nn::Tensor<float> feats(n, dim, 1, 1), labels(n, 1, 1, 1);
    nn::Tensor<float> mean(1, dim, 1, 1), stddev(1, dim, 1, 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < dim; ++j)
        feats.v[static_cast<std::size_t>(i) * dim + j] =
            static_cast<float>(features_[i][j]);
      labels.v[i] = static_cast<float>(labels_[i]);
    }
    for (int j = 0; j < dim; ++j) {
      mean.v[j] = static_cast<float>(mean_[j]);
      stddev.v[j] = static_cast<float>(stddev_[j]);
    }
    ckpt.tensors.emplace_back("features", feats);
    ckpt.tensors.emplace_back("labels", labels);
    ckpt.tensors.emplace_back("mean", mean);
    ckpt.tensors.emplace_back("stddev", stddev);
    save_checkpoint(path, ckpt);
  }

  void load_from(const Checkpoint& ckpt) {
    k_ = ckpt.header.at("k").get<int>();
    const auto& feats = ckpt.tensors[0].second;
    const auto& labels = ckpt.tensors[1].second;
    const auto& mean = ckpt.tensors[2].second;
    const auto& stddev = ckpt.tensors[3].second;
    features_.assign(feats.n, std::vector<double>(feats.c));
    labels_.assign(labels.n, 0);
    for (int i = 0; i < feats.n; ++i) {
      for (int j = 0; j < feats.c; ++j)
        features_[i][j] = feats.v[static_cast<std::size_t>(i) * feats.c + j];
      labels_[i] = static_cast<int>(labels.v[i]);
    }
    mean_.assign(mean.c, 0);
    stddev_.assign(stddev.c, 0);
    for (int j = 0; j < mean.c; ++j) {
      mean_[j] = mean.v[j];
      stddev_[j] = stddev.v[j];
    }
    trained_ = true;
  }

  void set_train_manifest_hash(std::string h) {
    train_manifest_hash_ = std::move(h);
  }

 private:
  int k_;
  std::uint64_t seed_;
  std::unique_ptr<preprocess::LandmarkBackend> backend_;
  bool trained_ = false;
  std::vector<std::vector<double>> features_;  // standardised
  std::vector<int> labels_;
  std::vector<double> mean_, stddev_;
  std::string train_manifest_hash_;
};

std::unique_ptr<Detector> train_knn(const data::Manifest& real_train,
                                    const data::Manifest& fake_train,
                                    const data::Manifest& real_val,
                                    const data::Manifest& fake_val,
                                    const TrainConfig& cfg, TrainInfo* info,
                                    bool verbose) {
  auto det = std::make_unique<KnnDetector>(cfg);
  auto backend = preprocess::make_landmark_backend();

  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  int dropped = 0;
  auto collect = [&](const data::Manifest& m, int label) {
    for (const auto& e : m.entries) {
      cv::Mat img = load_image(m.resolve(e));
      if (cfg.train_transform.kind != transforms::Kind::IDENTITY)
        img = transforms::apply(cfg.train_transform, img);
      auto lms = backend->detect(img);
      if (!lms) {
        ++dropped;
        continue;
      }
      feats.push_back(eye_color_features(img, *lms));
      labels.push_back(label);
    }
  };
  collect(real_train, 0);
  collect(fake_train, 1);
  require(!feats.empty(), "knn training: no usable faces");
  if (dropped)
    std::cerr << "knn training: dropped " << dropped
              << " images without detectable faces\n";
  det->fit(std::move(feats), std::move(labels));

  // Validation pass: orientation check plus accuracy for the record.
  std::vector<double> val_scores;
  std::vector<int> val_labels;
  auto eval = [&](const data::Manifest& m, int label) {
    for (const auto& e : m.entries) {
      val_scores.push_back(det->score(load_image(m.resolve(e))));
      val_labels.push_back(label);
    }
  };
  eval(real_val, 0);
  eval(fake_val, 1);
  double mean_fake = 0, mean_real = 0;
  int nf = 0, nr = 0;
  for (std::size_t i = 0; i < val_scores.size(); ++i) {
    if (val_labels[i]) {
      mean_fake += val_scores[i];
      ++nf;
    } else {
      mean_real += val_scores[i];
      ++nr;
    }
  }
  require(nf > 0 && nr > 0, "knn training: empty validation class");
  require(mean_fake / nf > mean_real / nr,
          "detector training failed: mean fake score does not exceed mean "
          "real score on validation data");
  if (info) {
    info->best_val_accuracy = accuracy_at_half(val_scores, val_labels);
    info->val_accuracy.push_back(info->best_val_accuracy);
    info->best_epoch = 1;
  }
  if (verbose)
    std::cerr << "artifacts val_acc " << accuracy_at_half(val_scores, val_labels)
              << "\n";
  return det;
}

}  // namespace

std::unique_ptr<Detector> train_detector(Kind kind,
                                         const data::Manifest& real_train,
                                         const data::Manifest& fake_train,
                                         const data::Manifest& real_val,
                                         const data::Manifest& fake_val,
                                         const TrainConfig& cfg,
                                         TrainInfo* info, bool verbose) {
  require(!real_train.empty() && !fake_train.empty() && !real_val.empty() &&
              !fake_val.empty(),
          "train_detector: empty manifest");
  const auto imbalance = [](const data::Manifest& a, const data::Manifest& b) {
    return std::llabs(static_cast<long long>(a.size()) -
                      static_cast<long long>(b.size()));
  };
  require(imbalance(real_train, fake_train) <= 1,
          "train_detector: training classes unbalanced (",
          real_train.size(), " real vs ", fake_train.size(),
          " fake); run balance first");
  require(imbalance(real_val, fake_val) <= 1,
          "train_detector: validation classes unbalanced (",
          real_val.size(), " real vs ", fake_val.size(), " fake)");

  std::unique_ptr<Detector> det;
  if (kind == Kind::LOCAL_ARTIFACTS)
    det = train_knn(real_train, fake_train, real_val, fake_val, cfg, info,
                    verbose);
  else
    det = train_cnn(kind, real_train, fake_train, real_val, fake_val, cfg,
                    info, verbose);

  Fnv1a h;
  h.update(data::serialize_manifest(real_train));
  h.update(data::serialize_manifest(fake_train));
  if (auto* c = dynamic_cast<CnnDetector*>(det.get()))
    c->set_train_manifest_hash(h.hex());
  else if (auto* kd = dynamic_cast<KnnDetector*>(det.get()))
    kd->set_train_manifest_hash(h.hex());
  return det;
}

std::unique_ptr<Detector> load_detector(const std::string& path) {
  Checkpoint ckpt = load_checkpoint(path);
  require(ckpt.header.value("kind", "") == "detector",
          "not a detector checkpoint: ", path);
  const Kind kind = kind_from_string(ckpt.header.at("detector").get<std::string>());
  TrainConfig cfg;
  cfg.seed = ckpt.header.value("seed", 0ULL);
  if (kind == Kind::LOCAL_ARTIFACTS) {
    auto det = std::make_unique<KnnDetector>(cfg);
    det->load_from(ckpt);
    return det;
  }
  if (kind == Kind::HOLISTIC_CNN)
    cfg.backbone = ckpt.header.at("backbone").get<std::string>();
  cfg.dropout = ckpt.header.value("dropout", 0.5);
  auto det = std::make_unique<CnnDetector>(kind, cfg);
  det->load_params(ckpt);
  return det;
}

std::vector<double> score_manifest(Detector& det, const data::Manifest& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (const auto& e : m.entries) out.push_back(det.score(load_image(m.resolve(e))));
  return out;
}

}  // namespace ganbench::detectors
